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

#ifndef DIAQUAD_DIAGNOSTICS_H_
#define DIAQUAD_DIAGNOSTICS_H_

#include <cstdint>

#include "diaquad/autodiff/grad_check.h"
#include "diaquad/corpus.h"
#include "diaquad/model.h"
#include "diaquad/model_config.h"

namespace diaquad {

// All widths set to dim, dropout off, two GAT heads so head averaging is
// exercised.
ModelConfig GradCheckModelConfig(int dim = 8);

// A two-utterance synthetic dialogue with one intra and one inter quad
// when the profile allows it.
Dialogue GradCheckDialogue(uint64_t seed = 7);

// Finite-difference check of the full-model grid loss over every parameter.
ad::GradCheckReport CheckModelGradients(const TripleGnnModel& model,
                                        const Dialogue& d,
                                        const ad::GradCheckOptions& options = {});

}  // namespace diaquad

#endif  // DIAQUAD_DIAGNOSTICS_H_
