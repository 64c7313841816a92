// Copyright 2026 The DiaQuad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "diaquad/autodiff/lstm.h"

#include <vector>

#include "diaquad/autodiff/ops.h"
#include "diaquad/error.h"

namespace diaquad::ad {

LstmWeights LstmWeights::Create(ParamStore& store, const std::string& prefix,
                                int input_size, int hidden, ParamGroup group) {
  LstmWeights w;
  w.hidden = hidden;
  w.input = store.Create(prefix + ".w_ih", {input_size, 4 * hidden}, group);
  w.recurrent = store.Create(prefix + ".w_hh", {hidden, 4 * hidden}, group);
  w.bias = store.Create(prefix + ".b", {1, 4 * hidden}, group, Init::kZeros);
  return w;
}

Tensor Lstm(const Tensor& seq, const LstmWeights& w, bool reverse) {
  if (seq.rank() != 2 || seq.cols() != w.input.rows()) {
    throw Error(ErrorCode::kShapeMismatch,
                "lstm: input " + ShapeString(seq.shape()) + " vs weights " +
                    ShapeString(w.input.shape()));
  }
  const int steps = seq.rows();
  const int h = w.hidden;
  // Input projections for all steps at once.
  const Tensor projected = Add(MatMul(seq, w.input), w.bias);
  Tensor hidden = Tensor::Zeros({1, h});
  Tensor cell = Tensor::Zeros({1, h});
  std::vector<Tensor> outputs(steps);
  for (int k = 0; k < steps; ++k) {
    const int t = reverse ? steps - 1 - k : k;
    const int row[] = {t};
    const Tensor gates =
        Add(GatherRows(projected, row), MatMul(hidden, w.recurrent));
    const Tensor i = Sigmoid(SliceCols(gates, 0, h));
    const Tensor f = Sigmoid(SliceCols(gates, h, 2 * h));
    const Tensor g = Tanh(SliceCols(gates, 2 * h, 3 * h));
    const Tensor o = Sigmoid(SliceCols(gates, 3 * h, 4 * h));
    cell = Add(Mul(f, cell), Mul(i, g));
    hidden = Mul(o, Tanh(cell));
    outputs[t] = hidden;
  }
  return ConcatRows(outputs);
}

Tensor BiLstm(const Tensor& seq, const LstmWeights& forward,
              const LstmWeights& backward) {
  const Tensor parts[] = {Lstm(seq, forward, false), Lstm(seq, backward, true)};
  return ConcatCols(parts);
}

}  // namespace diaquad::ad
