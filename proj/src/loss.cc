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

#include "diaquad/loss.h"

#include <sstream>

#include "diaquad/autodiff/ops.h"
#include "diaquad/error.h"

namespace diaquad {

namespace {

template <typename Label, size_t L>
Tensor HeadLoss(const char* head, const Tensor& probs, const LabelGrid<Label>& gold,
                const std::array<double, L>& weights) {
  const int n = gold.n();
  if (probs.rows() != n * n || probs.cols() != static_cast<int>(L)) {
    std::ostringstream msg;
    msg << head << " loss: probabilities " << ad::ShapeString(probs.shape())
        << " vs gold grid " << n << "x" << n << " with " << L << " labels";
    throw Error(ErrorCode::kShapeMismatch, msg.str());
  }
  std::vector<int> labels;
  labels.reserve(gold.cells().size());
  for (Label l : gold.cells()) labels.push_back(static_cast<int>(l));
  return ad::WeightedNll(probs, labels, weights, kLogEpsilon,
                         static_cast<double>(n) * n);
}

}  // namespace

Tensor EntityLoss(const Tensor& probs, const LabelGrid<EntityLabel>& gold,
                  const LossWeights& w) {
  return HeadLoss("entity", probs, gold, w.entity);
}

Tensor PairLoss(const Tensor& probs, const LabelGrid<PairLabel>& gold,
                const LossWeights& w) {
  return HeadLoss("pair", probs, gold, w.pair);
}

Tensor PolarityLoss(const Tensor& probs, const LabelGrid<PolarityLabel>& gold,
                    const LossWeights& w) {
  return HeadLoss("polarity", probs, gold, w.polarity);
}

Tensor GridLoss(const Tensor& entity, const Tensor& pair, const Tensor& polarity,
                const TagGrids& gold, const LossWeights& w) {
  return ad::Add(ad::Add(EntityLoss(entity, gold.entity, w),
                         PairLoss(pair, gold.pair, w)),
                 PolarityLoss(polarity, gold.polarity, w));
}

Tensor GridLoss(const ForwardResult& r, const TagGrids& gold, const LossWeights& w) {
  return GridLoss(r.entity, r.pair, r.polarity, gold, w);
}

}  // namespace diaquad
