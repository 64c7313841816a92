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

#include "diaquad/autodiff/params.h"

#include <cmath>

#include "diaquad/error.h"

namespace diaquad::ad {

Tensor ParamStore::Create(const std::string& name, Shape shape,
                          ParamGroup group, Init init) {
  if (index_.count(name)) {
    throw Error(ErrorCode::kInvariant, "duplicate parameter " + name);
  }
  for (int s : shape) {
    if (s < 1) {
      throw Error(ErrorCode::kShapeMismatch,
                  "parameter " + name + " has empty shape " + ShapeString(shape));
    }
  }
  const int n = NumElements(shape);
  std::vector<double> values(n, 0.0);
  if (init != Init::kZeros) {
    double bound = 0.1;
    if (init == Init::kXavier) {
      const int fan_out = shape.back();
      const int fan_in = n / fan_out;
      bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    }
    for (double& v : values) v = (2.0 * Unit() - 1.0) * bound;
  }
  Tensor t = Tensor::FromValues(std::move(shape), std::move(values), true);
  index_.emplace(name, params_.size());
  params_.push_back({name, t, group});
  return t;
}

const Parameter* ParamStore::Find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &params_[it->second];
}

void ParamStore::ZeroGrad() {
  for (Parameter& p : params_) p.value.ZeroGrad();
}

int ParamStore::NumScalars() const {
  int n = 0;
  for (const Parameter& p : params_) n += p.value.size();
  return n;
}

}  // namespace diaquad::ad
