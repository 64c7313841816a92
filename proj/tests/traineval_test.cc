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

#include <cmath>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "diaquad/autodiff/ops.h"
#include "diaquad/error.h"
#include "diaquad/loss.h"
#include "diaquad/metrics.h"
#include "diaquad/synth.h"
#include "diaquad/trainer.h"
#include "test_util.h"

namespace diaquad {
namespace {

using ad::Tensor;

// One-hot (n^2 x labels) probabilities for a label grid.
template <typename Label>
Tensor OneHot(const LabelGrid<Label>& g, int labels) {
  std::vector<double> v;
  for (Label l : g.cells()) {
    for (int k = 0; k < labels; ++k) v.push_back(static_cast<int>(l) == k ? 1.0 : 0.0);
  }
  return Tensor::FromValues({g.n() * g.n(), labels}, v);
}

TEST(Loss, PerfectPredictionsGiveZero) {
  const Dialogue d = SynthCorpus(2, 1).dialogues[0];
  const TagGrids g = EncodeGold(d, GlobalTokenMap(d));
  const double loss = GridLoss(OneHot(g.entity, 4), OneHot(g.pair, 3), OneHot(g.polarity, 4), g,
                               LossWeights{})
                          .item();
  EXPECT_NEAR(loss, 0.0, 1e-12);
}

TEST(Loss, UniformEntityPredictionsGiveLogFour) {
  const LabelGrid<EntityLabel> gold(2);
  const double loss = EntityLoss(Tensor::Full({4, 4}, 0.25), gold, LossWeights{}).item();
  EXPECT_NEAR(loss, std::log(4.0), 1e-12);
}

TEST(Loss, DoublingTargetWeightDoublesTargetCells) {
  const Dialogue d = SynthCorpus(2, 1).dialogues[0];
  const TagGrids g = EncodeGold(d, GlobalTokenMap(d));
  const int cells = g.n() * g.n();
  std::mt19937_64 rng(1);
  std::vector<double> v(cells * 4);
  for (double& x : v) x = 0.1 + static_cast<double>(rng() % 1000) / 1000.0;
  const Tensor probs = ad::Softmax(Tensor::FromValues({cells, 4}, v), 1);
  LossWeights w;
  const double base = EntityLoss(probs, g.entity, w).item();
  w.entity[0] *= 2.0;
  const double doubled = EntityLoss(probs, g.entity, w).item();
  // The difference is the original TGT contribution.
  double tgt = 0;
  for (int c = 0; c < cells; ++c) {
    if (g.entity.cells()[c] == EntityLabel::kTgt) tgt -= 3.0 * std::log(probs.at(c, 0));
  }
  tgt /= cells;
  EXPECT_GT(tgt, 0.0);
  EXPECT_NEAR(doubled - base, tgt, 1e-12);
}

TEST(Loss, ClampsAndChecksShapes) {
  const LabelGrid<PairLabel> gold(1);
  const double clamped = PairLoss(Tensor::FromValues({1, 3}, {1, 0, 0}), gold, LossWeights{}).item();
  EXPECT_NEAR(clamped, -std::log(kLogEpsilon), 1e-9);
  EXPECT_GE(clamped, 0.0);
  try {
    PairLoss(Tensor::Full({4, 3}, 1.0 / 3), gold, LossWeights{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
  try {
    EntityLoss(Tensor::Full({1, 3}, 1.0 / 3), LabelGrid<EntityLabel>(1), LossWeights{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
}

Quadruple Q(int u, int t, Polarity p = Polarity::kPos) {
  return {{u, t, t}, {u, t + 1, t + 1}, {u, t + 2, t + 2}, p};
}

Quadruple Inter(int t, Polarity p = Polarity::kNeg) {
  return {{0, t, t}, {1, t, t}, {1, t + 1, t + 1}, p};
}

TEST(Metrics, PerfectPrediction) {
  const std::vector<DialogueQuads> gold = {{"a", {Q(0, 0), Inter(0)}}, {"b", {Q(1, 3)}}};
  const EvalReport r = Evaluate(gold, gold);
  EXPECT_EQ(r.micro.f1(), 1.0);
  EXPECT_EQ(r.iden.f1(), 1.0);
  EXPECT_EQ(r.intra.f1(), 1.0);
  EXPECT_EQ(r.inter.f1(), 1.0);
}

TEST(Metrics, HalfMatched) {
  const std::vector<DialogueQuads> gold = {{"a", {Q(0, 0), Q(0, 3)}}};
  const std::vector<DialogueQuads> pred = {{"a", {Q(0, 0), Q(0, 6)}}};
  const EvalReport r = Evaluate(pred, gold);
  EXPECT_NEAR(r.micro.precision(), 0.5, 1e-12);
  EXPECT_NEAR(r.micro.recall(), 0.5, 1e-12);
  EXPECT_NEAR(r.micro.f1(), 0.5, 1e-12);
}

TEST(Metrics, PolarityFlip) {
  const std::vector<DialogueQuads> gold = {{"a", {Q(0, 0, Polarity::kPos)}}};
  const std::vector<DialogueQuads> pred = {{"a", {Q(0, 0, Polarity::kNeg)}}};
  const EvalReport r = Evaluate(pred, gold);
  EXPECT_EQ(r.micro.f1(), 0.0);
  EXPECT_EQ(r.iden.f1(), 1.0);
}

TEST(Metrics, EmptyPredictionsScoreZero) {
  const EvalReport r = Evaluate({{"a", {}}}, {{"a", {Q(0, 0)}}});
  EXPECT_EQ(r.micro.precision(), 0.0);
  EXPECT_EQ(r.micro.f1(), 0.0);
  EXPECT_EQ(Evaluate({{"a", {}}}, {{"a", {}}}).micro.f1(), 0.0);
}

TEST(Metrics, IdMismatch) {
  try {
    Evaluate({{"a", {}}}, {{"b", {}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIdMismatch);
  }
  EXPECT_THROW(Evaluate({{"a", {}}, {"a", {}}}, {{"a", {}}}), Error);
  EXPECT_THROW(Evaluate({}, {{"a", {}}}), Error);
}

TEST(Metrics, LocalityRestriction) {
  const std::vector<DialogueQuads> gold = {{"a", {Q(0, 0), Inter(0), Inter(3)}}};
  const std::vector<DialogueQuads> pred = {{"a", {Q(0, 0), Inter(3), Inter(6), Q(1, 5)}}};
  const EvalReport r = Evaluate(pred, gold);
  EXPECT_EQ(r.intra.gold, 1);
  EXPECT_EQ(r.intra.predicted, 2);
  EXPECT_EQ(r.intra.matched, 1);
  EXPECT_EQ(r.inter.gold, 2);
  EXPECT_EQ(r.inter.predicted, 2);
  EXPECT_EQ(r.inter.matched, 1);
  EXPECT_EQ(r.intra.matched + r.inter.matched, r.micro.matched);
  const nlohmann::json verbose = r.ToJson(true);
  EXPECT_TRUE(verbose.contains("locality_restriction"));
  EXPECT_FALSE(r.ToJson().contains("locality_restriction"));
}

TEST(Metrics, PropertiesUnderRandomPerturbation) {
  const auto dialogues = SynthCorpus(31, 20).dialogues;
  const auto gold = GoldQuads(dialogues);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    auto pred = gold;
    for (DialogueQuads& d : pred) {
      for (Quadruple& q : d.quads) {
        const int r = static_cast<int>(rng() % 4);
        if (r == 0) q.polarity = static_cast<Polarity>((static_cast<int>(q.polarity) + 1) % 3);
        if (r == 1) q.opinion.end = q.opinion.start;
        if (r == 2) q.target.utterance = (q.target.utterance + 1) % 3;
      }
      if (rng() % 3 == 0 && !d.quads.empty()) d.quads.pop_back();
    }
    const EvalReport r = Evaluate(pred, gold);
    EXPECT_GE(r.iden.f1(), r.micro.f1());
    EXPECT_LE(r.micro.matched, std::min(r.micro.gold, r.micro.predicted));
    EXPECT_EQ(r.intra.matched + r.inter.matched, r.micro.matched);
    auto shuffled = pred;
    std::reverse(shuffled.begin(), shuffled.end());
    EXPECT_EQ(Evaluate(shuffled, gold).micro.f1(), r.micro.f1());
  }
}

ModelConfig Tiny() {
  ModelConfig c;
  c.hidden = c.word_dim = c.encoder_hidden = 8;
  c.pos_dim = c.pos_hidden = c.edge_dim = c.mlp_dim = 6;
  return c;
}

std::vector<std::string> ReadLines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(Train, DeterministicLogsAndCheckpoint) {
  testing::TempDir tmp;
  const auto data = SynthCorpus(7, 3).dialogues;
  TrainOptions o;
  o.epochs = 3;
  o.other_lr = o.encoder_lr = 3e-3;
  o.record_seconds = false;
  std::vector<std::vector<std::string>> logs;
  for (const char* dir : {"a", "b"}) {
    auto model = MakeModel(Tiny(), ModelVocab::Build(data));
    o.out_dir = tmp / dir;
    const TrainResult r = Train(*model, data, {}, o);
    EXPECT_EQ(r.epochs.size(), 3u);
    logs.push_back(ReadLines(o.out_dir / "train_log.jsonl"));
  }
  ASSERT_EQ(logs[0].size(), 4u);
  for (size_t i = 1; i < logs[0].size(); ++i) EXPECT_EQ(logs[0][i], logs[1][i]);
  const nlohmann::json header = nlohmann::json::parse(logs[0][0]);
  EXPECT_EQ(header["version"], kLogFormatVersion);
  const nlohmann::json epoch = nlohmann::json::parse(logs[0][1]);
  for (const char* key : {"epoch", "train_loss", "dev_micro_f1", "dev_iden_f1", "dev_intra_f1",
                          "dev_inter_f1", "seconds"}) {
    EXPECT_TRUE(epoch.contains(key)) << key;
  }
  EXPECT_TRUE(std::filesystem::exists(tmp / "a" / "best.ckpt.json"));
}

TEST(Train, LossDecreasesAndBestEpochPrefersEarlierTies) {
  const auto data = SynthCorpus(7, 2).dialogues;
  ModelConfig c = Tiny();
  c.dropout = 0.0;
  auto model = MakeModel(c, ModelVocab::Build(data));
  TrainOptions o;
  o.epochs = 25;
  o.other_lr = o.encoder_lr = 5e-3;
  const TrainResult r = Train(*model, data, data, o);
  EXPECT_LT(r.epochs.back().train_loss, 0.5 * r.initial_loss);
  double best = -1;
  int first = 0;
  for (const EpochLog& e : r.epochs) {
    if (e.dev.micro.f1() > best) {
      best = e.dev.micro.f1();
      first = e.epoch;
    }
  }
  EXPECT_EQ(r.best_epoch, first);
  EXPECT_EQ(r.best_dev_micro_f1, best);
}

TEST(Train, AblatedRunLogsFlagsInHeader) {
  testing::TempDir tmp;
  const auto data = SynthCorpus(9, 2).dialogues;
  ModelConfig c = Tiny();
  c.use_syn_gcn = false;
  auto model = MakeModel(c, ModelVocab::Build(data));
  TrainOptions o;
  o.epochs = 1;
  o.out_dir = tmp.path();
  Train(*model, data, {}, o, {{"note", "ablation"}});
  const auto header = nlohmann::json::parse(ReadLines(tmp / "train_log.jsonl").front());
  EXPECT_EQ(header["model_config"]["use_syn_gcn"], "false");
  EXPECT_EQ(header["run_config"]["note"], "ablation");
}

TEST(Train, RejectsEmptyCorpusAndConflicts) {
  auto model = MakeModel(Tiny(), ModelVocab{});
  EXPECT_THROW(Train(*model, {}, {}, TrainOptions{}), Error);
  const Quadruple a{{0, 0, 1}, {0, 3, 3}, {0, 5, 5}, Polarity::kPos};
  const Quadruple b{{0, 3, 3}, {0, 0, 1}, {0, 6, 6}, Polarity::kPos};
  const Dialogue bad = testing::MakeDialogue({{"a", kNone, 8}}, {a, b}, "bad");
  try {
    Train(*model, {bad}, {}, TrainOptions{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGridConflict);
    EXPECT_NE(std::string(e.what()).find("'bad'"), std::string::npos);
  }
}

TEST(Train, SavedModelReloadsWithIdenticalPredictions) {
  testing::TempDir tmp;
  const auto data = SynthCorpus(4, 3).dialogues;
  auto model = MakeModel(Tiny(), ModelVocab::Build(data));
  TrainOptions o;
  o.epochs = 2;
  o.other_lr = 1e-2;
  Train(*model, data, {}, o);
  SaveModel(tmp / "m.json", *model, {}, {{"k", 1}});
  auto loaded = LoadModel(tmp / "m.json");
  EXPECT_EQ(loaded->config().ToConfig().values(), model->config().ToConfig().values());
  const auto a = Predict(*model, data), b = Predict(*loaded, data);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].quads, b[i].quads);
  EXPECT_EQ(MeanLoss(*model, data), MeanLoss(*loaded, data));
}

TEST(Train, OptionsFromConfig) {
  ConfigMap c;
  c.Set("epochs", "5");
  c.Set("lr", "0.01");
  c.Set("encoder_lr", "0.001");
  const TrainOptions o = TrainOptions::FromConfig(c);
  EXPECT_EQ(o.epochs, 5);
  EXPECT_EQ(o.other_lr, 0.01);
  EXPECT_EQ(o.encoder_lr, 0.001);
  EXPECT_EQ(TrainOptions{}.encoder_lr, 1e-5);
  c.Set("epochs", "0");
  EXPECT_THROW(TrainOptions::FromConfig(c), Error);
}

}  // namespace
}  // namespace diaquad
