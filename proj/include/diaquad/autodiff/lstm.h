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

#ifndef DIAQUAD_AUTODIFF_LSTM_H_
#define DIAQUAD_AUTODIFF_LSTM_H_

#include <string>

#include "diaquad/autodiff/params.h"
#include "diaquad/autodiff/tensor.h"

namespace diaquad::ad {

// Single-direction LSTM weights; gate column blocks are ordered
// (input, forget, cell, output).
struct LstmWeights {
  Tensor input;      // in x 4h
  Tensor recurrent;  // h x 4h
  Tensor bias;       // 1 x 4h
  int hidden = 0;

  static LstmWeights Create(ParamStore& store, const std::string& prefix,
                            int input_size, int hidden, ParamGroup group);
};

// seq is (steps x in); returns (steps x h) aligned with the input order.
// reverse runs from the last step to the first.
Tensor Lstm(const Tensor& seq, const LstmWeights& w, bool reverse);

// Forward and backward passes concatenated per step: (steps x 2h).
Tensor BiLstm(const Tensor& seq, const LstmWeights& forward,
              const LstmWeights& backward);

}  // namespace diaquad::ad

#endif  // DIAQUAD_AUTODIFF_LSTM_H_
