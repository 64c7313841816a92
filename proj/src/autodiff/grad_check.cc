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

#include "diaquad/autodiff/grad_check.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace diaquad::ad {

using nlohmann::json;

json GradCheckReport::ToJson() const {
  json entries_json = json::array();
  for (const GradCheckEntry& e : entries) {
    entries_json.push_back({{"name", e.name},
                            {"elements", e.elements},
                            {"max_rel_error", e.max_rel_error},
                            {"max_abs_error", e.max_abs_error},
                            {"worst_index", e.worst_index},
                            {"passed", e.passed}});
  }
  return {{"passed", passed},
          {"tolerance", tolerance},
          {"max_rel_error", max_rel_error},
          {"parameters", entries_json}};
}

GradCheckReport GradCheck(const std::function<Tensor()>& loss,
                          const std::vector<Parameter>& params,
                          const GradCheckOptions& options) {
  Tape& tape = Tape::Current();
  tape.Clear();
  for (const Parameter& p : params) p.value.node()->grad.clear();
  Backward(loss());
  std::vector<std::vector<double>> analytic;
  for (const Parameter& p : params) analytic.push_back(p.value.grad());

  GradCheckReport report;
  report.tolerance = options.tolerance;
  NoGradGuard no_grad;
  for (size_t k = 0; k < params.size(); ++k) {
    Tensor value = params[k].value;
    std::span<double> v = value.mutable_values();
    GradCheckEntry entry;
    entry.name = params[k].name;
    entry.elements = static_cast<int>(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
      const double saved = v[i];
      v[i] = saved + options.step;
      const double up = loss().item();
      v[i] = saved - options.step;
      const double down = loss().item();
      v[i] = saved;
      const double numeric = (up - down) / (2.0 * options.step);
      const double a = analytic[k][i];
      const double abs_err = std::fabs(a - numeric);
      const double scale =
          std::max({std::fabs(a), std::fabs(numeric), options.scale_floor});
      double rel = abs_err / scale;
      if (std::isnan(rel)) rel = std::numeric_limits<double>::infinity();
      entry.max_abs_error = std::max(entry.max_abs_error, abs_err);
      if (rel > entry.max_rel_error || entry.worst_index < 0) {
        entry.max_rel_error = std::max(entry.max_rel_error, rel);
        entry.worst_index = static_cast<int>(i);
      }
    }
    entry.passed = entry.max_rel_error < options.tolerance;
    report.passed = report.passed && entry.passed;
    report.max_rel_error = std::max(report.max_rel_error, entry.max_rel_error);
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace diaquad::ad
