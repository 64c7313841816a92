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

#include "diaquad/layers.h"

#include "diaquad/autodiff/ops.h"
#include "diaquad/error.h"

namespace diaquad {

using namespace ad;

Linear Linear::Create(ParamStore& store, const std::string& name, int in,
                      int out, ParamGroup group) {
  return Linear{store.Create(name + ".w", {in, out}, group),
                store.Create(name + ".b", {1, out}, group, Init::kZeros)};
}

Tensor Linear::operator()(const Tensor& x) const {
  return Add(MatMul(x, weight), bias);
}

Tensor SynGcnForward(const SynGraph& graph, const Tensor& features,
                     std::span<const GcnLayer> layers) {
  const int n = graph.n_tokens;
  if (features.rank() != 2 || features.rows() != n) {
    throw Error(ErrorCode::kShapeMismatch,
                "syn-gcn: " + std::to_string(n) + " nodes vs features " +
                    ShapeString(features.shape()));
  }
  for (int i = 0; i < n; ++i) {
    bool any = false;
    for (int j = 0; j < n; ++j) any = any || graph(i, j) != 0.0;
    if (!any) {
      throw Error(ErrorCode::kInvariant,
                  "syn-gcn: adjacency row " + std::to_string(i) + " is empty");
    }
  }
  const Tensor adjacency = Tensor::FromValues({n, n}, graph.adjacency);
  Tensor h = features;
  for (const GcnLayer& layer : layers) {
    h = Relu(Add(MatMul(MatMul(adjacency, h), layer.weight), layer.bias));
  }
  return h;
}

TypedAdjacency ToTypedAdjacency(const SpeakerMatrix& m) {
  TypedAdjacency t{m.n(), {}};
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < m.n(); ++j) t.types.push_back(static_cast<int>(m(i, j)));
  }
  return t;
}

TypedAdjacency ToTypedAdjacency(const StructureMatrix& m) {
  TypedAdjacency t{m.n(), {}};
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < m.n(); ++j) {
      const StructureRelation r = m(i, j);
      t.types.push_back(r == StructureRelation::kNone ? -1 : static_cast<int>(r));
    }
  }
  return t;
}

GatOutput GatForward(const TypedAdjacency& adjacency, const Tensor& nodes,
                     std::span<const GatHead> heads, double leaky_slope) {
  const int n = adjacency.n;
  if (nodes.rank() != 2 || nodes.rows() != n) {
    throw Error(ErrorCode::kShapeMismatch,
                "gat: " + std::to_string(n) + " nodes vs features " +
                    ShapeString(nodes.shape()));
  }
  if (heads.empty()) throw Error(ErrorCode::kShapeMismatch, "gat: no heads");
  std::vector<bool> keep(adjacency.types.size());
  std::vector<int> type_index(adjacency.types.size());
  for (size_t c = 0; c < keep.size(); ++c) {
    keep[c] = adjacency.types[c] >= 0;
    type_index[c] = keep[c] ? adjacency.types[c] : 0;
  }
  GatOutput out;
  Tensor sum;
  for (const GatHead& head : heads) {
    const Tensor src = MatMul(MatMul(nodes, head.w_src), head.a_src);   // n x 1
    const Tensor dst = MatMul(MatMul(nodes, head.w_dst), head.a_dst);   // n x 1
    const Tensor edge = MatMul(head.edge_emb, head.a_edge);             // R x 1
    const Tensor edge_cells = IndexSelect(edge, type_index, {n, n});
    const Tensor logits =
        LeakyRelu(Add(Add(src, Transpose(dst)), edge_cells), leaky_slope);
    const Tensor alpha = MaskedSoftmaxRows(logits, keep);
    const Tensor head_out = MatMul(alpha, MatMul(nodes, head.w_val));
    out.attention.push_back(alpha);
    sum = sum.defined() ? Add(sum, head_out) : head_out;
  }
  out.output = heads.size() == 1
                   ? sum
                   : Scale(sum, 1.0 / static_cast<double>(heads.size()));
  return out;
}

InteractionOutput Interact(const Tensor& h_spk, const Tensor& h_str,
                           const Tensor& w1, const Tensor& w2) {
  if (h_spk.shape() != h_str.shape()) {
    throw Error(ErrorCode::kShapeMismatch,
                "interaction: " + ShapeString(h_spk.shape()) + " vs " +
                    ShapeString(h_str.shape()));
  }
  InteractionOutput out;
  out.a1 = Softmax(MatMul(MatMul(h_spk, w1), Transpose(h_str)), 1);
  out.a2 = Softmax(MatMul(MatMul(h_str, w2), Transpose(h_spk)), 1);
  out.speaker = MatMul(out.a1, h_spk);
  out.structure = MatMul(out.a2, h_str);
  return out;
}

Tensor Aggregate(std::span<const Tensor> h_syn, const Tensor& h_spk,
                 const Tensor& h_str, std::span<const Tensor> thread_encodings,
                 const std::vector<Thread>& threads, const GlobalTokenMap& map,
                 const AggregateParams& params) {
  const int n_utt = map.num_utterances();
  if (static_cast<int>(h_syn.size()) != n_utt || h_spk.rows() != n_utt ||
      h_str.rows() != n_utt || thread_encodings.size() != threads.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "aggregate: inputs do not match a dialogue of " +
                    std::to_string(n_utt) + " utterances");
  }
  std::vector<Tensor> tri_rows;
  for (int i = 0; i < n_utt; ++i) {
    const int n_i = map.utterance_size(i);
    if (h_syn[i].rows() != n_i) {
      throw Error(ErrorCode::kShapeMismatch,
                  "aggregate: syntactic features of utterance " +
                      std::to_string(i) + " have shape " +
                      ShapeString(h_syn[i].shape()));
    }
    const int row[] = {i};
    const Tensor utt_parts[] = {GatherRows(h_spk, row), GatherRows(h_str, row)};
    const Tensor utt_vec = ConcatCols(utt_parts);
    const Tensor expanded = MatMul(Tensor::Full({n_i, 1}, 1.0), utt_vec);
    const Tensor token_parts[] = {h_syn[i], expanded};
    tri_rows.push_back(params.tri(ConcatCols(token_parts)));
  }
  const Tensor tri = ConcatRows(tri_rows);

  const int total = map.size();
  std::vector<double> copies(total, 0.0);
  Tensor acc;
  for (size_t t = 0; t < threads.size(); ++t) {
    std::vector<int> rows;
    for (int u : threads[t].members) {
      for (int k = 0; k < map.utterance_size(u); ++k) {
        rows.push_back(map.ToGlobal(u, k));
      }
    }
    if (thread_encodings[t].rows() != static_cast<int>(rows.size())) {
      throw Error(ErrorCode::kShapeMismatch,
                  "aggregate: thread " + std::to_string(t) + " encoding has " +
                      ShapeString(thread_encodings[t].shape()) + " for " +
                      std::to_string(rows.size()) + " tokens");
    }
    for (int r : rows) copies[r] += 1.0;
    const Tensor parts[] = {GatherRows(tri, rows), thread_encodings[t]};
    const Tensor mixed = params.thread(ConcatCols(parts));
    const Tensor scattered = ScatterAddRows(mixed, rows, total);
    acc = acc.defined() ? Add(acc, scattered) : scattered;
  }
  for (double& c : copies) {
    if (c == 0.0) {
      throw Error(ErrorCode::kInvariant, "aggregate: token on no thread");
    }
    c = 1.0 / c;
  }
  return Mul(acc, Tensor::FromValues({total, 1}, std::move(copies)));
}

Tensor GridHeadScores(const Tensor& h_dialogue,
                      std::span<const LabelScorer> labels, bool symmetric) {
  const int n = h_dialogue.rows();
  std::vector<Tensor> columns;
  for (const LabelScorer& scorer : labels) {
    const Tensor hidden = Tanh(scorer.hidden(h_dialogue));
    const Tensor q = scorer.query(hidden);
    const Tensor k = symmetric ? q : scorer.key(hidden);
    columns.push_back(Reshape(MatMul(q, Transpose(k)), {n * n, 1}));
  }
  return Softmax(ConcatCols(columns), 1);
}

}  // namespace diaquad
