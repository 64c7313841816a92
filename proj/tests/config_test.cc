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

#include <cstdlib>
#include <fstream>

#include <gtest/gtest.h>

#include "diaquad/config.h"
#include "diaquad/error.h"
#include "diaquad/model_config.h"
#include "diaquad/trainer.h"
#include "test_util.h"

namespace diaquad {
namespace {

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvariant;
}

TEST(ConfigMap, ParsesCommentsQuotesAndSections) {
  const ConfigMap c = ConfigMap::ParseText(
      "# header\n[model]\nhidden = 16\n  name = \"a # b\"  # trailing\n\nflag=yes\n", "t");
  EXPECT_EQ(c.GetInt("hidden", 0), 16);
  EXPECT_EQ(c.GetString("name", ""), "a # b");
  EXPECT_TRUE(c.GetBool("flag", false));
  EXPECT_EQ(c.values().size(), 3u);
}

TEST(ConfigMap, ReportsMalformedLines) {
  try {
    ConfigMap::ParseText("a = 1\nbroken\n", "cfg.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadConfig);
    EXPECT_NE(std::string(e.what()).find("cfg.txt:2"), std::string::npos);
  }
  EXPECT_EQ(CodeOf([] { ConfigMap::ParseText(" = 3", "t"); }), ErrorCode::kBadConfig);
  EXPECT_EQ(CodeOf([] { ConfigMap::ReadFile("/nonexistent/cfg"); }), ErrorCode::kIo);
}

TEST(ConfigMap, TypedGettersRejectGarbage) {
  ConfigMap c;
  c.Set("i", "12x");
  c.Set("d", "abc");
  c.Set("b", "maybe");
  EXPECT_EQ(CodeOf([&] { c.GetInt("i", 0); }), ErrorCode::kBadConfig);
  EXPECT_EQ(CodeOf([&] { c.GetDouble("d", 0); }), ErrorCode::kBadConfig);
  EXPECT_EQ(CodeOf([&] { c.GetBool("b", false); }), ErrorCode::kBadConfig);
  EXPECT_EQ(c.GetInt("missing", 5), 5);
  c.Set("d", "1e-5");
  EXPECT_EQ(c.GetDouble("d", 0), 1e-5);
}

TEST(ConfigMap, MergeLetsLaterSourcesWin) {
  ConfigMap env, file, flags;
  env.Set("epochs", "1");
  env.Set("seed", "3");
  file.Set("epochs", "2");
  file.Set("dropout", "0.1");
  flags.Set("epochs", "9");
  ConfigMap merged = env;
  merged.Merge(file);
  merged.Merge(flags);
  EXPECT_EQ(merged.GetInt("epochs", 0), 9);
  EXPECT_EQ(merged.GetInt("seed", 0), 3);
  EXPECT_EQ(merged.GetDouble("dropout", 0), 0.1);
}

TEST(ConfigMap, ReadsPrefixedEnvironment) {
  ConfigMap known;
  known.Set("encoder_lr", "");
  known.Set("loss_weight.pair.h2h", "");
  known.Set("hidden", "");
  setenv("DIAQUADT_ENCODER_LR", "0.5", 1);
  setenv("DIAQUADT_LOSS_WEIGHT_PAIR_H2H", "4", 1);
  unsetenv("DIAQUADT_HIDDEN");
  const ConfigMap c = ConfigMap::FromEnvironment("DIAQUADT_", known);
  EXPECT_EQ(c.GetDouble("encoder_lr", 0), 0.5);
  EXPECT_EQ(c.GetDouble("loss_weight.pair.h2h", 0), 4.0);
  EXPECT_FALSE(c.Has("hidden"));
}

TEST(ConfigMap, TextAndJsonRoundTrip) {
  testing::TempDir tmp;
  const ConfigMap c = ModelConfig{}.ToConfig();
  {
    std::ofstream(tmp / "c.cfg") << c.ToText();
  }
  EXPECT_EQ(ConfigMap::ReadFile(tmp / "c.cfg").values(), c.values());
  EXPECT_EQ(ConfigMap::FromJson(c.ToJson()).values(), c.values());
  nlohmann::json j = {{"epochs", 4}, {"name", "x"}};
  EXPECT_EQ(ConfigMap::FromJson(j).GetInt("epochs", 0), 4);
}

TEST(ModelConfig, DefaultsAndRoundTrip) {
  const ModelConfig d;
  EXPECT_EQ(d.dropout, 0.4);
  EXPECT_EQ(d.loss_weights.entity[static_cast<int>(EntityLabel::kNone)], 1.0);
  EXPECT_EQ(d.loss_weights.pair[static_cast<int>(PairLabel::kH2H)], 3.0);
  ModelConfig m;
  m.hidden = 12;
  m.leaky_slope = 0.123456789;
  m.use_str_gat = false;
  m.structure_mode = StructureMode::kFullyConnected;
  m.loss_weights.polarity[1] = 2.5;
  const ModelConfig back = ModelConfig::FromConfig(m.ToConfig());
  EXPECT_EQ(back.ToConfig().values(), m.ToConfig().values());
  EXPECT_EQ(back.leaky_slope, m.leaky_slope);
  EXPECT_EQ(back.structure_mode, StructureMode::kFullyConnected);
}

TEST(ModelConfig, LossWeightShorthandAndOverrides) {
  ConfigMap c;
  c.Set("loss_weight", "5");
  c.Set("loss_weight_none", "0.5");
  c.Set("loss_weight.pair.t2t", "7");
  const LossWeights w = ModelConfig::FromConfig(c).loss_weights;
  EXPECT_EQ(w.entity[static_cast<int>(EntityLabel::kTgt)], 5.0);
  EXPECT_EQ(w.entity[static_cast<int>(EntityLabel::kNone)], 0.5);
  EXPECT_EQ(w.pair[static_cast<int>(PairLabel::kT2T)], 7.0);
  EXPECT_EQ(w.pair[static_cast<int>(PairLabel::kH2H)], 5.0);
  EXPECT_EQ(w.polarity[static_cast<int>(PolarityLabel::kNone)], 0.5);
}

TEST(ModelConfig, ValidationRejectsBadValues) {
  for (auto [key, value] : std::vector<std::pair<std::string, std::string>>{
           {"hidden", "0"},
           {"dropout", "1"},
           {"dropout", "-0.1"},
           {"loss_weight.entity.tgt", "0"},
           {"structure_mode", "dense"},
           {"use_syn_gcn", "2"}}) {
    ConfigMap c;
    c.Set(key, value);
    EXPECT_EQ(CodeOf([&] { ModelConfig::FromConfig(c); }), ErrorCode::kBadConfig)
        << key << "=" << value;
  }
}

TEST(TrainOptions, RoundTrip) {
  TrainOptions o;
  o.epochs = 11;
  o.encoder_lr = 2e-5;
  o.other_lr = 4e-4;
  o.seed = 99;
  o.shuffle = false;
  const TrainOptions back = TrainOptions::FromConfig(o.ToConfig());
  EXPECT_EQ(back.epochs, 11);
  EXPECT_EQ(back.encoder_lr, 2e-5);
  EXPECT_EQ(back.other_lr, 4e-4);
  EXPECT_EQ(back.seed, 99u);
  EXPECT_FALSE(back.shuffle);
}

TEST(EncoderSpec, JsonRoundTrip) {
  EncoderSpec s{"precomputed", "vec.json"};
  const EncoderSpec back = EncoderSpec::FromJson(s.ToJson());
  EXPECT_EQ(back.kind, "precomputed");
  EXPECT_EQ(back.vectors, "vec.json");
  EXPECT_EQ(CodeOf([] { MakeModel(ModelConfig{}, ModelVocab{}, EncoderSpec{"bert", ""}); }),
            ErrorCode::kBadConfig);
}

}  // namespace
}  // namespace diaquad
