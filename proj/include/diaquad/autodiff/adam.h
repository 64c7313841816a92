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

#ifndef DIAQUAD_AUTODIFF_ADAM_H_
#define DIAQUAD_AUTODIFF_ADAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "diaquad/autodiff/params.h"
#include "diaquad/autodiff/tensor.h"
#include "json.hpp"

namespace diaquad::ad {

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamHyper hyper;
  int64_t step = 0;
  // Moments aligned with the parameter list; sized on the first step.
  std::vector<std::vector<double>> first;
  std::vector<std::vector<double>> second;
};

// One bias-corrected Adam update. learning_rates holds one rate per
// parameter. Throws kShapeMismatch when the spans or moments disagree.
void AdamStep(AdamState& state, std::span<Tensor> params,
              std::span<const std::vector<double>> grads,
              std::span<const double> learning_rates);

// Applies AdamStep to every parameter of a store using its accumulated
// gradients and a per-group learning rate.
class Adam {
 public:
  Adam(double encoder_lr, double other_lr, AdamHyper hyper = {});

  void Step(ParamStore& store);

  AdamState& state() { return state_; }
  const AdamState& state() const { return state_; }
  double encoder_lr() const { return encoder_lr_; }
  double other_lr() const { return other_lr_; }

  nlohmann::json ToJson(const ParamStore& store) const;
  // Restores moments for the parameters of store; validates sizes.
  void LoadJson(const nlohmann::json& j, const ParamStore& store);

 private:
  double encoder_lr_;
  double other_lr_;
  AdamState state_;
};

}  // namespace diaquad::ad

#endif  // DIAQUAD_AUTODIFF_ADAM_H_
