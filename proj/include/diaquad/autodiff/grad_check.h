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

#ifndef DIAQUAD_AUTODIFF_GRAD_CHECK_H_
#define DIAQUAD_AUTODIFF_GRAD_CHECK_H_

#include <functional>
#include <string>
#include <vector>

#include "diaquad/autodiff/params.h"
#include "diaquad/autodiff/tensor.h"
#include "json.hpp"

namespace diaquad::ad {

struct GradCheckOptions {
  double step = 1e-5;
  double tolerance = 1e-4;
  // Relative error is |analytic - numeric| / max(|analytic|, |numeric|,
  // scale_floor); the floor keeps near-zero gradients from amplifying
  // rounding noise in the central difference.
  double scale_floor = 1e-3;
};

struct GradCheckEntry {
  std::string name;
  int elements = 0;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  int worst_index = -1;
  bool passed = true;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  bool passed = true;

  nlohmann::json ToJson() const;
};

// Compares reverse-mode gradients of loss() with central finite
// differences for every element of params. loss must be deterministic in
// the parameter values.
GradCheckReport GradCheck(const std::function<Tensor()>& loss,
                          const std::vector<Parameter>& params,
                          const GradCheckOptions& options = {});

}  // namespace diaquad::ad

#endif  // DIAQUAD_AUTODIFF_GRAD_CHECK_H_
