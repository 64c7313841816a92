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

#ifndef DIAQUAD_LAYERS_H_
#define DIAQUAD_LAYERS_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "diaquad/autodiff/params.h"
#include "diaquad/autodiff/tensor.h"
#include "diaquad/corpus.h"
#include "diaquad/graphs.h"

namespace diaquad {

using ad::Tensor;

// y = x W + b
struct Linear {
  Tensor weight;  // in x out
  Tensor bias;    // 1 x out

  static Linear Create(ad::ParamStore& store, const std::string& name, int in,
                       int out, ad::ParamGroup group = ad::ParamGroup::kOther);
  Tensor operator()(const Tensor& x) const;
};

struct GcnLayer {
  Tensor weight;  // d_l x d_l
  Tensor bias;    // 1 x d_l
};

// L layers of H <- ReLU(A H W + b) starting from the node features.
// Every adjacency row must have a nonzero entry (kInvariant otherwise).
Tensor SynGcnForward(const SynGraph& graph, const Tensor& features,
                     std::span<const GcnLayer> layers);

// Relation type ids per cell, row-major n x n; -1 marks a masked pair.
struct TypedAdjacency {
  int n = 0;
  std::vector<int> types;
};

TypedAdjacency ToTypedAdjacency(const SpeakerMatrix& m);
TypedAdjacency ToTypedAdjacency(const StructureMatrix& m);

// One attention head over typed edges:
//   logit_ij = LeakyReLU(a_src.(W_src h_i) + a_dst.(W_dst h_j) + a_edge.E_ij)
//   alpha_i  = softmax over unmasked j, out_i = sum_j alpha_ij W_val h_j
struct GatHead {
  Tensor w_src;     // d x d
  Tensor w_dst;     // d x d
  Tensor w_val;     // d x d
  Tensor a_src;     // d x 1
  Tensor a_dst;     // d x 1
  Tensor a_edge;    // edge_dim x 1
  Tensor edge_emb;  // relation types x edge_dim
};

struct GatOutput {
  Tensor output;                  // n x d, mean over heads
  std::vector<Tensor> attention;  // per head, n x n
};

GatOutput GatForward(const TypedAdjacency& adjacency, const Tensor& nodes,
                     std::span<const GatHead> heads, double leaky_slope);

struct InteractionOutput {
  Tensor speaker;    // A1 H_spk
  Tensor structure;  // A2 H_str
  Tensor a1;
  Tensor a2;
};

// A1 = rowsoftmax(H_spk W1 H_str^T), A2 = rowsoftmax(H_str W2 H_spk^T).
InteractionOutput Interact(const Tensor& h_spk, const Tensor& h_str,
                           const Tensor& w1, const Tensor& w2);

struct AggregateParams {
  Linear tri;     // (d_l + 2d) -> d
  Linear thread;  // 2d -> d
};

// Per utterance: concat(H_syn_i, broadcast(H_spk'_i ; H_str'_i)) -> tri.
// Per thread: concat(gathered tri rows, thread encoding) -> thread, then
// scattered back to dialogue order and averaged over the threads that
// contain each token. Returns N_sum x d.
Tensor Aggregate(std::span<const Tensor> h_syn, const Tensor& h_spk,
                 const Tensor& h_str, std::span<const Tensor> thread_encodings,
                 const std::vector<Thread>& threads, const GlobalTokenMap& map,
                 const AggregateParams& params);

// Tag-specific two-layer scorer for one label of one grid head.
struct LabelScorer {
  Linear hidden;  // d -> m, tanh
  Linear query;   // m -> m
  Linear key;     // m -> m; unused in symmetric mode
};

// (N_sum^2 x labels) row-stochastic matrix of per-cell label distributions.
Tensor GridHeadScores(const Tensor& h_dialogue,
                      std::span<const LabelScorer> labels, bool symmetric);

}  // namespace diaquad

#endif  // DIAQUAD_LAYERS_H_
