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

#ifndef DIAQUAD_LOSS_H_
#define DIAQUAD_LOSS_H_

#include "diaquad/autodiff/tensor.h"
#include "diaquad/grid.h"
#include "diaquad/model.h"
#include "diaquad/model_config.h"

namespace diaquad {

inline constexpr double kLogEpsilon = 1e-12;

// -(1/N^2) sum_ij alpha[y_ij] log p_ij[y_ij] for one head; probs is
// (N^2 x labels). Throws kShapeMismatch when probs and gold disagree.
Tensor EntityLoss(const Tensor& probs, const LabelGrid<EntityLabel>& gold,
                  const LossWeights& w);
Tensor PairLoss(const Tensor& probs, const LabelGrid<PairLabel>& gold,
                const LossWeights& w);
Tensor PolarityLoss(const Tensor& probs, const LabelGrid<PolarityLabel>& gold,
                    const LossWeights& w);

// Sum of the three head losses.
Tensor GridLoss(const Tensor& entity, const Tensor& pair, const Tensor& polarity,
                const TagGrids& gold, const LossWeights& w);
Tensor GridLoss(const ForwardResult& r, const TagGrids& gold, const LossWeights& w);

}  // namespace diaquad

#endif  // DIAQUAD_LOSS_H_
