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

#ifndef DIAQUAD_GRID_H_
#define DIAQUAD_GRID_H_

#include <array>
#include <string_view>
#include <vector>

#include "diaquad/corpus.h"

namespace diaquad {

// Label indices double as probability-grid channel indices; the NONE label
// is always the last channel of its head.
enum class EntityLabel { kTgt = 0, kAsp = 1, kOpi = 2, kNone = 3 };
enum class PairLabel { kH2H = 0, kT2T = 1, kNone = 2 };
enum class PolarityLabel { kPos = 0, kNeg = 1, kOther = 2, kNone = 3 };

inline constexpr int kEntityLabels = 4;
inline constexpr int kPairLabels = 3;
inline constexpr int kPolarityLabels = 4;

std::string_view LabelName(EntityLabel l);
std::string_view LabelName(PairLabel l);
std::string_view LabelName(PolarityLabel l);

PolarityLabel ToPolarityLabel(Polarity p);

// Square grid over the dialogue-wide token sequence.
template <typename Label>
class LabelGrid {
 public:
  LabelGrid() = default;
  explicit LabelGrid(int n) : n_(n), cells_(static_cast<size_t>(n) * n, Label::kNone) {}

  int n() const { return n_; }
  Label operator()(int i, int j) const { return cells_[i * n_ + j]; }
  Label& operator()(int i, int j) { return cells_[i * n_ + j]; }
  const std::vector<Label>& cells() const { return cells_; }
  int CountNonNone() const {
    int c = 0;
    for (Label l : cells_) c += l != Label::kNone;
    return c;
  }
  bool operator==(const LabelGrid&) const = default;

 private:
  int n_ = 0;
  std::vector<Label> cells_;
};

struct TagGrids {
  LabelGrid<EntityLabel> entity;
  LabelGrid<PairLabel> pair;
  LabelGrid<PolarityLabel> polarity;

  int n() const { return entity.n(); }
  bool operator==(const TagGrids&) const = default;
};

// Per-cell label distributions, row-major (i, j, label).
struct ProbGrids {
  int n = 0;
  std::vector<double> entity;    // n * n * kEntityLabels
  std::vector<double> pair;      // n * n * kPairLabels
  std::vector<double> polarity;  // n * n * kPolarityLabels
};

// Writes span cells (start, end), H2H/T2T links for target-aspect and
// aspect-opinion pairs and the polarity at (head_target, head_opinion).
// When a pair's head and tail cells coincide (both spans single-token) the
// H2H label stands for both links. Throws kGridConflict when two quads
// demand different labels in one cell.
TagGrids EncodeGold(const Dialogue& d, const GlobalTokenMap& map);

// Per-cell argmax; an exact tie for the maximum yields the NONE label.
TagGrids ArgmaxGrids(const ProbGrids& probs);

// Rule set that turns tag grids into quadruples.
class QuadDecoder {
 public:
  virtual ~QuadDecoder() = default;
  virtual std::vector<Quadruple> Decode(const TagGrids& grids,
                                        const GlobalTokenMap& map) const = 0;
};

// Spans from the entity grid, target-aspect and aspect-opinion links that
// need both H2H and T2T, joined on the shared aspect; candidates whose
// polarity cell is NONE are dropped.
class PairJoinDecoder : public QuadDecoder {
 public:
  std::vector<Quadruple> Decode(const TagGrids& grids,
                                const GlobalTokenMap& map) const override;
};

// Sorted, duplicate-free output of PairJoinDecoder.
std::vector<Quadruple> Decode(const TagGrids& grids, const GlobalTokenMap& map);
std::vector<Quadruple> Decode(const ProbGrids& probs, const GlobalTokenMap& map);

}  // namespace diaquad

#endif  // DIAQUAD_GRID_H_
