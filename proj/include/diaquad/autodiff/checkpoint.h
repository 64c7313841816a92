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

#ifndef DIAQUAD_AUTODIFF_CHECKPOINT_H_
#define DIAQUAD_AUTODIFF_CHECKPOINT_H_

#include <filesystem>

#include "diaquad/autodiff/adam.h"
#include "diaquad/autodiff/params.h"
#include "json.hpp"

namespace diaquad::ad {

inline constexpr int kCheckpointVersion = 1;

// {"format", "version", "metadata", "params": [{"name","shape","values"}],
//  "optimizer"}
nlohmann::json CheckpointToJson(const ParamStore& store, const Adam* adam,
                                const nlohmann::json& metadata);

void SaveCheckpoint(const std::filesystem::path& path, const ParamStore& store,
                    const Adam* adam, const nlohmann::json& metadata);

// Parses and checks format/version; throws kMalformedFile.
nlohmann::json ReadCheckpoint(const std::filesystem::path& path);

// Copies parameter values into store. Every stored parameter must exist in
// store with the same shape and vice versa (kShapeMismatch otherwise).
void RestoreParams(const nlohmann::json& checkpoint, ParamStore& store);

}  // namespace diaquad::ad

#endif  // DIAQUAD_AUTODIFF_CHECKPOINT_H_
