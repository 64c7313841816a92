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

#ifndef DIAQUAD_METRICS_H_
#define DIAQUAD_METRICS_H_

#include <string>
#include <vector>

#include "diaquad/corpus.h"
#include "json.hpp"

namespace diaquad {

// Quadruples for one dialogue, predicted or gold.
struct DialogueQuads {
  std::string id;
  std::vector<Quadruple> quads;
};

std::vector<DialogueQuads> GoldQuads(const std::vector<Dialogue>& dialogues);

struct MetricCounts {
  int gold = 0;
  int predicted = 0;
  int matched = 0;

  double precision() const;
  double recall() const;
  double f1() const;  // 0 when precision + recall is 0
  MetricCounts& operator+=(const MetricCounts& o);
  nlohmann::json ToJson() const;
};

struct EvalReport {
  MetricCounts micro;  // exact (t, a, o, p)
  MetricCounts iden;   // (t, a, o), polarity ignored
  MetricCounts intra;  // micro restricted to intra-utterance quads
  MetricCounts inter;  // micro restricted to cross-utterance quads
  int dialogues = 0;

  nlohmann::json ToJson(bool verbose = false) const;
};

// Pools counts over dialogues matched by id; duplicate quads count once.
// Throws kIdMismatch when the two id sets differ or repeat.
EvalReport Evaluate(const std::vector<DialogueQuads>& predicted,
                    const std::vector<DialogueQuads>& gold);

}  // namespace diaquad

#endif  // DIAQUAD_METRICS_H_
