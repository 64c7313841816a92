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

#include "diaquad/graphs.h"

#include <cmath>

#include "diaquad/error.h"

namespace diaquad {

using nlohmann::json;

std::string_view RelationName(SpeakerRelation r) {
  switch (r) {
    case SpeakerRelation::kSelfPast: return "self-past";
    case SpeakerRelation::kSelfFuture: return "self-future";
    case SpeakerRelation::kInterPast: return "inter-past";
    case SpeakerRelation::kInterFuture: return "inter-future";
    case SpeakerRelation::kSelfLoop: return "self-loop";
  }
  return "?";
}

std::string_view RelationName(StructureRelation r) {
  switch (r) {
    case StructureRelation::kSelfLoop: return "self-loop";
    case StructureRelation::kReplyPast: return "reply-past";
    case StructureRelation::kReplyFuture: return "reply-future";
    case StructureRelation::kThreadPast: return "thread-past";
    case StructureRelation::kThreadFuture: return "thread-future";
    case StructureRelation::kNone: return "none";
  }
  return "?";
}

SpeakerMatrix BuildSpeakerGraph(const Dialogue& d) {
  const int n = d.size();
  SpeakerMatrix m(n, SpeakerRelation::kSelfLoop);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool same =
          d.utterances[i].speaker_id == d.utterances[j].speaker_id;
      const bool past = j < i;
      if (same) {
        m(i, j) = past ? SpeakerRelation::kSelfPast : SpeakerRelation::kSelfFuture;
      } else {
        m(i, j) =
            past ? SpeakerRelation::kInterPast : SpeakerRelation::kInterFuture;
      }
    }
  }
  return m;
}

StructureMatrix BuildStructureGraph(const Dialogue& d,
                                    const std::vector<Thread>& threads,
                                    StructureMode mode) {
  const int n = d.size();
  StructureMatrix m(n, StructureRelation::kNone);
  auto thread_typed = [](int i, int j) {
    return j < i ? StructureRelation::kThreadPast
                 : StructureRelation::kThreadFuture;
  };
  for (const Thread& t : threads) {
    for (int a : t.members) {
      for (int b : t.members) {
        if (a != b) m(a, b) = thread_typed(a, b);
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    m(i, i) = StructureRelation::kSelfLoop;
    const int parent = d.utterances[i].reply_to;
    if (parent != kNone) {
      m(i, parent) = StructureRelation::kReplyPast;
      m(parent, i) = StructureRelation::kReplyFuture;
    }
  }
  if (mode == StructureMode::kFullyConnected) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (m(i, j) == StructureRelation::kNone) m(i, j) = thread_typed(i, j);
      }
    }
  }
  return m;
}

json SynGraph::ToJson() const {
  json rows = json::array();
  for (int i = 0; i < n_tokens; ++i) {
    json row = json::array();
    for (int j = 0; j < n_tokens; ++j) row.push_back((*this)(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

SynGraph BuildSyntacticGraph(const Utterance& u) {
  SynGraph g;
  g.n_tokens = u.size();
  const int n = g.n_tokens;
  g.adjacency.assign(static_cast<size_t>(n) * n, 0.0);
  for (int k = 0; k < n; ++k) {
    g.adjacency[k * n + k] = 1.0;
    const int h = u.tokens[k].dep_head;
    if (h == kNone) continue;
    if (h < 0 || h >= n || h == k) {
      throw Error(ErrorCode::kInvariant, "invalid dependency head in utterance " +
                                             std::to_string(u.index));
    }
    g.adjacency[k * n + h] = 1.0;
    g.adjacency[h * n + k] = 1.0;
  }
  return g;
}

SynGraph NormalizeSyntacticGraph(const SynGraph& g) {
  const int n = g.n_tokens;
  std::vector<double> inv_sqrt(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double deg = 0.0;
    for (int j = 0; j < n; ++j) deg += g(i, j);
    inv_sqrt[i] = deg > 0.0 ? 1.0 / std::sqrt(deg) : 0.0;
  }
  SynGraph out = g;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out.adjacency[i * n + j] = g(i, j) * inv_sqrt[i] * inv_sqrt[j];
    }
  }
  return out;
}

std::set<int> Neighborhood(const SpeakerMatrix& m, int /*i*/) {
  std::set<int> out;
  for (int j = 0; j < m.n(); ++j) out.insert(j);
  return out;
}

std::set<int> Neighborhood(const StructureMatrix& m, int i) {
  std::set<int> out;
  for (int j = 0; j < m.n(); ++j) {
    if (m(i, j) != StructureRelation::kNone) out.insert(j);
  }
  return out;
}

json GraphsToJson(const Dialogue& d, StructureMode mode) {
  const std::vector<Thread> threads = ExtractThreads(d);
  json syn = json::array();
  for (const Utterance& u : d.utterances) {
    syn.push_back(BuildSyntacticGraph(u).ToJson());
  }
  json jthreads = json::array();
  for (const Thread& t : threads) jthreads.push_back(t.members);
  return {{"dialogue_id", d.id},
          {"threads", jthreads},
          {"speaker", BuildSpeakerGraph(d).ToJson()},
          {"structure", BuildStructureGraph(d, threads, mode).ToJson()},
          {"syntactic", syn}};
}

}  // namespace diaquad
