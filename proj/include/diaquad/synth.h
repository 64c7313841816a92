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

#ifndef DIAQUAD_SYNTH_H_
#define DIAQUAD_SYNTH_H_

#include <cstdint>
#include <vector>

#include "diaquad/corpus.h"
#include "json.hpp"

namespace diaquad {

// Generator bounds. Quadruples are planted from small lexicons so that the
// corpus is learnable; entity spans never overlap except for an exactly
// shared target, which keeps the gold grids conflict-free.
struct SynthProfile {
  int min_utterances = 2;
  int max_utterances = 6;
  int min_tokens = 6;
  int max_tokens = 12;
  int num_speakers = 3;
  int min_quads = 1;
  int max_quads = 3;
  int max_span_length = 2;
  double intra_ratio = 0.5;
  double shared_target_prob = 0.2;

  nlohmann::json ToJson() const;
  static SynthProfile FromJson(const nlohmann::json& j);
};

// Throws kBadProfile when bounds are not sane.
void CheckProfile(const SynthProfile& profile);

struct SynthManifest {
  uint64_t seed = 0;
  int requested = 0;
  SynthProfile profile;
  CorpusStats stats;

  nlohmann::json ToJson() const;
};

struct SynthResult {
  std::vector<Dialogue> dialogues;
  SynthManifest manifest;
};

// Deterministic given (seed, n_dialogues, profile).
SynthResult SynthCorpus(uint64_t seed, int n_dialogues,
                        const SynthProfile& profile = {});

nlohmann::json StatsToJson(const CorpusStats& s);

}  // namespace diaquad

#endif  // DIAQUAD_SYNTH_H_
