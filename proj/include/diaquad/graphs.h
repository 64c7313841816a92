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

#ifndef DIAQUAD_GRAPHS_H_
#define DIAQUAD_GRAPHS_H_

#include <set>
#include <string_view>
#include <vector>

#include "diaquad/corpus.h"
#include "json.hpp"

namespace diaquad {

enum class SpeakerRelation {
  kSelfPast,
  kSelfFuture,
  kInterPast,
  kInterFuture,
  kSelfLoop,
};
inline constexpr int kNumSpeakerRelations = 5;

enum class StructureRelation {
  kSelfLoop,
  kReplyPast,
  kReplyFuture,
  kThreadPast,
  kThreadFuture,
  kNone,  // masked pair
};
// Embedded (non-masked) structure relation types.
inline constexpr int kNumStructureRelations = 5;

std::string_view RelationName(SpeakerRelation r);
std::string_view RelationName(StructureRelation r);

// Dense n x n table of typed utterance relations; cell(i, j) is the
// relation of j as seen from i.
template <typename Relation>
class RelationMatrix {
 public:
  RelationMatrix() = default;
  RelationMatrix(int n, Relation fill) : n_(n), cells_(n * n, fill) {}

  int n() const { return n_; }
  Relation operator()(int i, int j) const { return cells_[i * n_ + j]; }
  Relation& operator()(int i, int j) { return cells_[i * n_ + j]; }
  bool operator==(const RelationMatrix&) const = default;

  nlohmann::json ToJson() const {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < n_; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < n_; ++j) row.push_back(RelationName((*this)(i, j)));
      rows.push_back(std::move(row));
    }
    return rows;
  }

 private:
  int n_ = 0;
  std::vector<Relation> cells_;
};

using SpeakerMatrix = RelationMatrix<SpeakerRelation>;
using StructureMatrix = RelationMatrix<StructureRelation>;

// How cross-branch utterance pairs are typed in the structure graph.
enum class StructureMode {
  kMasked,          // unrelated branches get kNone
  kFullyConnected,  // every pair typed; cross-branch pairs use THREAD_*
};

SpeakerMatrix BuildSpeakerGraph(const Dialogue& d);

StructureMatrix BuildStructureGraph(const Dialogue& d,
                                    const std::vector<Thread>& threads,
                                    StructureMode mode = StructureMode::kMasked);

// Token-level adjacency of one utterance's dependency tree: undirected
// head edges plus self-loops, weights in {0, 1}.
struct SynGraph {
  int n_tokens = 0;
  std::vector<double> adjacency;  // row-major n x n

  double operator()(int i, int j) const { return adjacency[i * n_tokens + j]; }
  nlohmann::json ToJson() const;
};

SynGraph BuildSyntacticGraph(const Utterance& u);

// Symmetric degree normalization D^-1/2 A D^-1/2 (off by default).
SynGraph NormalizeSyntacticGraph(const SynGraph& g);

std::set<int> Neighborhood(const SpeakerMatrix& m, int i);
std::set<int> Neighborhood(const StructureMatrix& m, int i);

// Per-dialogue dump with relation names spelled out.
nlohmann::json GraphsToJson(const Dialogue& d,
                            StructureMode mode = StructureMode::kMasked);

}  // namespace diaquad

#endif  // DIAQUAD_GRAPHS_H_
