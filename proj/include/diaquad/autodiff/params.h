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

#ifndef DIAQUAD_AUTODIFF_PARAMS_H_
#define DIAQUAD_AUTODIFF_PARAMS_H_

#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "diaquad/autodiff/tensor.h"

namespace diaquad::ad {

// Optimizer groups; the encoder group gets its own learning rate.
enum class ParamGroup { kEncoder, kOther };

struct Parameter {
  std::string name;
  Tensor value;
  ParamGroup group = ParamGroup::kOther;
};

enum class Init {
  kXavier,   // U(-sqrt(6/(fan_in+fan_out)), +...)
  kUniform,  // U(-0.1, 0.1), used for embedding tables
  kZeros,
};

// Owns every trainable tensor of a model, in creation order.
class ParamStore {
 public:
  explicit ParamStore(uint64_t seed = 0) : engine_(seed) {}

  Tensor Create(const std::string& name, Shape shape, ParamGroup group,
                Init init = Init::kXavier);

  const std::vector<Parameter>& params() const { return params_; }
  std::vector<Parameter>& params() { return params_; }
  const Parameter* Find(const std::string& name) const;
  bool Contains(const std::string& name) const { return Find(name) != nullptr; }

  void ZeroGrad();
  int NumScalars() const;

 private:
  double Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 engine_;
  std::vector<Parameter> params_;
  std::unordered_map<std::string, size_t> index_;
};

}  // namespace diaquad::ad

#endif  // DIAQUAD_AUTODIFF_PARAMS_H_
