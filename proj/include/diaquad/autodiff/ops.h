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

#ifndef DIAQUAD_AUTODIFF_OPS_H_
#define DIAQUAD_AUTODIFF_OPS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "diaquad/autodiff/tensor.h"

namespace diaquad::ad {

// All operators are differentiable unless noted and record themselves on
// the current thread's tape when any input requires a gradient. Matrix
// operators expect rank-2 tensors and throw kShapeMismatch otherwise.

Tensor MatMul(const Tensor& a, const Tensor& b);

// Elementwise with rank-2 broadcasting: each dimension must match or be 1.
Tensor Add(const Tensor& a, const Tensor& b);
Tensor Sub(const Tensor& a, const Tensor& b);
Tensor Mul(const Tensor& a, const Tensor& b);
Tensor Scale(const Tensor& a, double s);

Tensor ConcatCols(std::span<const Tensor> parts);
Tensor ConcatRows(std::span<const Tensor> parts);
Tensor SliceCols(const Tensor& a, int begin, int end);
std::vector<Tensor> SplitCols(const Tensor& a, std::span<const int> widths);

Tensor GatherRows(const Tensor& a, std::span<const int> rows);
// out[rows[k]] += a[k]; out has n_rows rows.
Tensor ScatterAddRows(const Tensor& a, std::span<const int> rows, int n_rows);
// out (shape) with out[c] = a[index[c]] over the flattened storage of a.
Tensor IndexSelect(const Tensor& a, std::vector<int> index, Shape shape);

Tensor Transpose(const Tensor& a);
Tensor Reshape(const Tensor& a, Shape shape);

Tensor Relu(const Tensor& a);
Tensor LeakyRelu(const Tensor& a, double slope);
Tensor Sigmoid(const Tensor& a);
Tensor Tanh(const Tensor& a);

// axis 0 (columns) or 1 / -1 (rows) of a rank-2 tensor.
Tensor Softmax(const Tensor& a, int axis);
// Row softmax restricted to keep[i * cols + j] == true; other entries are
// exactly 0. Every row must keep at least one entry.
Tensor MaskedSoftmaxRows(const Tensor& a, const std::vector<bool>& keep);

Tensor EmbeddingLookup(const Tensor& table, std::span<const int> ids);

// Counter-based mask so a given (seed, layer, step) always drops the same
// elements. Identity when !train or rate == 0.
struct DropoutKey {
  uint64_t seed = 0;
  uint64_t layer = 0;
  uint64_t step = 0;
};
Tensor Dropout(const Tensor& a, double rate, bool train, DropoutKey key);

Tensor Sum(const Tensor& a);
Tensor Mean(const Tensor& a);

// -(1/normalizer) * sum_c weights[gold[c]] * log(max(p[c, gold[c]], eps))
// for a (cells x labels) probability matrix.
Tensor WeightedNll(const Tensor& probs, std::span<const int> gold,
                   std::span<const double> weights, double eps,
                   double normalizer);

// Uniform double in [0, 1) from a 64-bit counter hash.
double CounterUniform(uint64_t seed, uint64_t layer, uint64_t step,
                      uint64_t index);

}  // namespace diaquad::ad

#endif  // DIAQUAD_AUTODIFF_OPS_H_
