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

#include "diaquad/grid.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "diaquad/error.h"

namespace diaquad {

std::string_view LabelName(EntityLabel l) {
  switch (l) {
    case EntityLabel::kTgt: return "tgt";
    case EntityLabel::kAsp: return "asp";
    case EntityLabel::kOpi: return "opi";
    case EntityLabel::kNone: return "none";
  }
  return "?";
}

std::string_view LabelName(PairLabel l) {
  switch (l) {
    case PairLabel::kH2H: return "h2h";
    case PairLabel::kT2T: return "t2t";
    case PairLabel::kNone: return "none";
  }
  return "?";
}

std::string_view LabelName(PolarityLabel l) {
  switch (l) {
    case PolarityLabel::kPos: return "pos";
    case PolarityLabel::kNeg: return "neg";
    case PolarityLabel::kOther: return "other";
    case PolarityLabel::kNone: return "none";
  }
  return "?";
}

PolarityLabel ToPolarityLabel(Polarity p) {
  switch (p) {
    case Polarity::kPos: return PolarityLabel::kPos;
    case Polarity::kNeg: return PolarityLabel::kNeg;
    case Polarity::kOther: return PolarityLabel::kOther;
  }
  return PolarityLabel::kNone;
}

namespace {

std::string QuadText(const Quadruple& q) {
  std::ostringstream os;
  auto span = [&os](const Span& s) {
    os << "[" << s.utterance << "," << s.start << "," << s.end << "]";
  };
  os << "(";
  span(q.target);
  os << " ";
  span(q.aspect);
  os << " ";
  span(q.opinion);
  os << " " << PolarityName(q.polarity) << ")";
  return os.str();
}

// Tracks which quad wrote each cell so conflicts name both parties.
template <typename Label>
class GridWriter {
 public:
  GridWriter(LabelGrid<Label>& grid, const std::vector<Quadruple>& quads,
             const char* head)
      : grid_(grid), owner_(grid.cells().size(), -1), quads_(quads), head_(head) {}

  void Write(int i, int j, Label label, int quad) {
    Label& cell = grid_(i, j);
    int& owner = owner_[i * grid_.n() + j];
    if (cell == Label::kNone) {
      cell = label;
      owner = quad;
      return;
    }
    if (cell == label) return;
    throw Error(ErrorCode::kGridConflict,
                std::string(head_) + " cell (" + std::to_string(i) + "," +
                    std::to_string(j) + "): " + std::string(LabelName(cell)) +
                    " from quad " + QuadText(quads_[owner]) + " vs " +
                    std::string(LabelName(label)) + " from quad " +
                    QuadText(quads_[quad]));
  }

 private:
  LabelGrid<Label>& grid_;
  std::vector<int> owner_;
  const std::vector<Quadruple>& quads_;
  const char* head_;
};

struct GlobalSpan {
  int head;
  int tail;
};

}  // namespace

TagGrids EncodeGold(const Dialogue& d, const GlobalTokenMap& map) {
  const int n = map.size();
  TagGrids grids{LabelGrid<EntityLabel>(n), LabelGrid<PairLabel>(n),
                 LabelGrid<PolarityLabel>(n)};
  GridWriter<EntityLabel> entity(grids.entity, d.gold_quads, "entity");
  GridWriter<PairLabel> pair(grids.pair, d.gold_quads, "pair");
  GridWriter<PolarityLabel> polarity(grids.polarity, d.gold_quads, "polarity");

  auto global = [&map](const Span& s) {
    return GlobalSpan{map.ToGlobal(s.utterance, s.start),
                      map.ToGlobal(s.utterance, s.end)};
  };
  auto link = [&pair](GlobalSpan x, GlobalSpan y, int q) {
    pair.Write(x.head, y.head, PairLabel::kH2H, q);
    if (x.tail != x.head || y.tail != y.head) {
      pair.Write(x.tail, y.tail, PairLabel::kT2T, q);
    }
  };
  for (size_t k = 0; k < d.gold_quads.size(); ++k) {
    const int q = static_cast<int>(k);
    const Quadruple& quad = d.gold_quads[k];
    const GlobalSpan t = global(quad.target);
    const GlobalSpan a = global(quad.aspect);
    const GlobalSpan o = global(quad.opinion);
    entity.Write(t.head, t.tail, EntityLabel::kTgt, q);
    entity.Write(a.head, a.tail, EntityLabel::kAsp, q);
    entity.Write(o.head, o.tail, EntityLabel::kOpi, q);
    link(t, a, q);
    link(a, o, q);
    polarity.Write(t.head, o.head, ToPolarityLabel(quad.polarity), q);
  }
  return grids;
}

namespace {

template <typename Label>
LabelGrid<Label> ArgmaxOne(int n, const std::vector<double>& probs, int labels) {
  if (static_cast<int>(probs.size()) != n * n * labels) {
    throw Error(ErrorCode::kShapeMismatch,
                "probability grid has " + std::to_string(probs.size()) +
                    " entries, expected " + std::to_string(n * n * labels));
  }
  LabelGrid<Label> grid(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double* p = probs.data() + (static_cast<size_t>(i) * n + j) * labels;
      int best = 0;
      bool tie = false;
      for (int l = 1; l < labels; ++l) {
        if (p[l] > p[best]) {
          best = l;
          tie = false;
        } else if (p[l] == p[best]) {
          tie = true;
        }
      }
      grid(i, j) = tie ? Label::kNone : static_cast<Label>(best);
    }
  }
  return grid;
}

}  // namespace

TagGrids ArgmaxGrids(const ProbGrids& probs) {
  return TagGrids{ArgmaxOne<EntityLabel>(probs.n, probs.entity, kEntityLabels),
                  ArgmaxOne<PairLabel>(probs.n, probs.pair, kPairLabels),
                  ArgmaxOne<PolarityLabel>(probs.n, probs.polarity,
                                           kPolarityLabels)};
}

std::vector<Quadruple> PairJoinDecoder::Decode(const TagGrids& grids,
                                               const GlobalTokenMap& map) const {
  const int n = grids.n();
  if (n != map.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "grid size " + std::to_string(n) + " vs dialogue of " +
                    std::to_string(map.size()) + " tokens");
  }
  std::vector<GlobalSpan> spans[3];  // target, aspect, opinion
  for (int s = 0; s < n; ++s) {
    for (int e = s; e < n; ++e) {
      const EntityLabel l = grids.entity(s, e);
      if (l == EntityLabel::kNone) continue;
      // A span never straddles an utterance boundary.
      if (map.ToLocal(s).first != map.ToLocal(e).first) continue;
      spans[static_cast<int>(l)].push_back({s, e});
    }
  }
  auto linked = [&grids](GlobalSpan x, GlobalSpan y) {
    if (grids.pair(x.head, y.head) != PairLabel::kH2H) return false;
    if (x.tail == x.head && y.tail == y.head) return true;
    return grids.pair(x.tail, y.tail) == PairLabel::kT2T;
  };
  auto local = [&map](GlobalSpan g) {
    const auto [u, s] = map.ToLocal(g.head);
    const int e = map.ToLocal(g.tail).second;
    return Span{u, s, e};
  };

  std::set<Quadruple> out;
  for (const GlobalSpan& a : spans[1]) {
    for (const GlobalSpan& t : spans[0]) {
      if (!linked(t, a)) continue;
      for (const GlobalSpan& o : spans[2]) {
        if (!linked(a, o)) continue;
        const PolarityLabel p = grids.polarity(t.head, o.head);
        if (p == PolarityLabel::kNone) continue;
        out.insert(Quadruple{local(t), local(a), local(o),
                             static_cast<Polarity>(static_cast<int>(p))});
      }
    }
  }
  return {out.begin(), out.end()};
}

std::vector<Quadruple> Decode(const TagGrids& grids, const GlobalTokenMap& map) {
  return PairJoinDecoder().Decode(grids, map);
}

std::vector<Quadruple> Decode(const ProbGrids& probs, const GlobalTokenMap& map) {
  return Decode(ArgmaxGrids(probs), map);
}

}  // namespace diaquad
