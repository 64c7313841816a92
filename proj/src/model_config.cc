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

#include "diaquad/model_config.h"

#include <sstream>

#include "diaquad/error.h"

namespace diaquad {

namespace {

std::string Num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void LossWeights::Validate() const {
  auto check = [](auto& arr, const char* head) {
    for (double w : arr) {
      if (!(w > 0.0)) {
        throw Error(ErrorCode::kBadConfig,
                    std::string(head) + " loss weights must be > 0");
      }
    }
  };
  check(entity, "entity");
  check(pair, "pair");
  check(polarity, "polarity");
}

void ModelConfig::Validate() const {
  const std::pair<const char*, int> dims[] = {
      {"hidden", hidden},         {"word_dim", word_dim},
      {"encoder_hidden", encoder_hidden}, {"pos_dim", pos_dim},
      {"pos_hidden", pos_hidden}, {"gcn_layers", gcn_layers},
      {"gat_heads", gat_heads},   {"edge_dim", edge_dim},
      {"mlp_dim", mlp_dim}};
  for (const auto& [name, v] : dims) {
    if (v < 1) {
      throw Error(ErrorCode::kBadConfig, std::string(name) + " must be >= 1");
    }
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw Error(ErrorCode::kBadConfig, "dropout must lie in [0, 1)");
  }
  loss_weights.Validate();
}

ModelConfig ModelConfig::FromConfig(const ConfigMap& c) {
  ModelConfig m;
  m.hidden = c.GetInt("hidden", m.hidden);
  m.word_dim = c.GetInt("word_dim", m.word_dim);
  m.encoder_hidden = c.GetInt("encoder_hidden", m.encoder_hidden);
  m.pos_dim = c.GetInt("pos_dim", m.pos_dim);
  m.pos_hidden = c.GetInt("pos_hidden", m.pos_hidden);
  m.gcn_layers = c.GetInt("gcn_layers", m.gcn_layers);
  m.gat_heads = c.GetInt("gat_heads", m.gat_heads);
  m.edge_dim = c.GetInt("edge_dim", m.edge_dim);
  m.mlp_dim = c.GetInt("mlp_dim", m.mlp_dim);
  m.leaky_slope = c.GetDouble("leaky_slope", m.leaky_slope);
  m.dropout = c.GetDouble("dropout", m.dropout);
  m.use_syn_gcn = c.GetBool("use_syn_gcn", m.use_syn_gcn);
  m.use_spk_gat = c.GetBool("use_spk_gat", m.use_spk_gat);
  m.use_str_gat = c.GetBool("use_str_gat", m.use_str_gat);
  m.normalize_syn = c.GetBool("normalize_syn", m.normalize_syn);
  m.symmetric_grid_scores =
      c.GetBool("symmetric_grid_scores", m.symmetric_grid_scores);
  const std::string mode = c.GetString("structure_mode", "masked");
  if (mode == "masked") {
    m.structure_mode = StructureMode::kMasked;
  } else if (mode == "fully_connected") {
    m.structure_mode = StructureMode::kFullyConnected;
  } else {
    throw Error(ErrorCode::kBadConfig, "structure_mode must be masked or fully_connected");
  }
  m.seed = static_cast<uint64_t>(c.GetInt("seed", static_cast<int>(m.seed)));

  const double label_weight = c.GetDouble("loss_weight", 3.0);
  const double none_weight = c.GetDouble("loss_weight_none", 1.0);
  LossWeights& w = m.loss_weights;
  for (int l = 0; l < kEntityLabels; ++l) {
    const auto label = static_cast<EntityLabel>(l);
    w.entity[l] = c.GetDouble(
        "loss_weight.entity." + std::string(LabelName(label)),
        label == EntityLabel::kNone ? none_weight : label_weight);
  }
  for (int l = 0; l < kPairLabels; ++l) {
    const auto label = static_cast<PairLabel>(l);
    w.pair[l] = c.GetDouble("loss_weight.pair." + std::string(LabelName(label)),
                            label == PairLabel::kNone ? none_weight : label_weight);
  }
  for (int l = 0; l < kPolarityLabels; ++l) {
    const auto label = static_cast<PolarityLabel>(l);
    w.polarity[l] = c.GetDouble(
        "loss_weight.polarity." + std::string(LabelName(label)),
        label == PolarityLabel::kNone ? none_weight : label_weight);
  }
  m.Validate();
  return m;
}

ConfigMap ModelConfig::ToConfig() const {
  ConfigMap c;
  c.Set("hidden", std::to_string(hidden));
  c.Set("word_dim", std::to_string(word_dim));
  c.Set("encoder_hidden", std::to_string(encoder_hidden));
  c.Set("pos_dim", std::to_string(pos_dim));
  c.Set("pos_hidden", std::to_string(pos_hidden));
  c.Set("gcn_layers", std::to_string(gcn_layers));
  c.Set("gat_heads", std::to_string(gat_heads));
  c.Set("edge_dim", std::to_string(edge_dim));
  c.Set("mlp_dim", std::to_string(mlp_dim));
  c.Set("leaky_slope", Num(leaky_slope));
  c.Set("dropout", Num(dropout));
  c.Set("use_syn_gcn", use_syn_gcn ? "true" : "false");
  c.Set("use_spk_gat", use_spk_gat ? "true" : "false");
  c.Set("use_str_gat", use_str_gat ? "true" : "false");
  c.Set("normalize_syn", normalize_syn ? "true" : "false");
  c.Set("symmetric_grid_scores", symmetric_grid_scores ? "true" : "false");
  c.Set("structure_mode", structure_mode == StructureMode::kMasked
                              ? "masked"
                              : "fully_connected");
  c.Set("seed", std::to_string(seed));
  for (int l = 0; l < kEntityLabels; ++l) {
    c.Set("loss_weight.entity." +
              std::string(LabelName(static_cast<EntityLabel>(l))),
          Num(loss_weights.entity[l]));
  }
  for (int l = 0; l < kPairLabels; ++l) {
    c.Set("loss_weight.pair." + std::string(LabelName(static_cast<PairLabel>(l))),
          Num(loss_weights.pair[l]));
  }
  for (int l = 0; l < kPolarityLabels; ++l) {
    c.Set("loss_weight.polarity." +
              std::string(LabelName(static_cast<PolarityLabel>(l))),
          Num(loss_weights.polarity[l]));
  }
  return c;
}

}  // namespace diaquad
