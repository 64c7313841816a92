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

#ifndef DIAQUAD_MODEL_CONFIG_H_
#define DIAQUAD_MODEL_CONFIG_H_

#include <array>
#include <cstdint>

#include "diaquad/config.h"
#include "diaquad/graphs.h"
#include "diaquad/grid.h"

namespace diaquad {

// Per-label loss weights, indexed by the grid label enums.
struct LossWeights {
  std::array<double, kEntityLabels> entity{3.0, 3.0, 3.0, 1.0};
  std::array<double, kPairLabels> pair{3.0, 3.0, 1.0};
  std::array<double, kPolarityLabels> polarity{3.0, 3.0, 3.0, 1.0};

  void Validate() const;  // all weights > 0
};

struct ModelConfig {
  int hidden = 32;           // d: utterance/thread/dialogue features
  int word_dim = 32;         // encoder word embeddings
  int encoder_hidden = 32;   // encoder LSTM, per direction
  int pos_dim = 16;          // d_e
  int pos_hidden = 16;       // d_l
  int gcn_layers = 2;
  int gat_heads = 1;
  int edge_dim = 8;          // relation-type embeddings
  int mlp_dim = 32;          // grid scorer width
  double leaky_slope = 0.2;
  double dropout = 0.4;
  bool use_syn_gcn = true;
  bool use_spk_gat = true;
  bool use_str_gat = true;
  bool normalize_syn = false;
  // true scores cells as v_i . v_j; false uses separate query/key vectors.
  bool symmetric_grid_scores = false;
  StructureMode structure_mode = StructureMode::kMasked;
  uint64_t seed = 7;
  LossWeights loss_weights;

  void Validate() const;  // throws kBadConfig

  // Keys documented in the README; unknown keys are left untouched.
  static ModelConfig FromConfig(const ConfigMap& c);
  ConfigMap ToConfig() const;
};

}  // namespace diaquad

#endif  // DIAQUAD_MODEL_CONFIG_H_
