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
#include <set>

#include <gtest/gtest.h>

#include "diaquad/autodiff/ops.h"
#include "diaquad/diagnostics.h"
#include "diaquad/error.h"
#include "diaquad/loss.h"
#include "diaquad/model.h"
#include "diaquad/synth.h"
#include "test_util.h"

namespace diaquad {
namespace {

using ad::Tensor;
using testing::MakeDialogue;

ModelConfig Small() {
  ModelConfig c;
  c.hidden = c.word_dim = c.encoder_hidden = 6;
  c.pos_dim = c.pos_hidden = c.edge_dim = c.mlp_dim = 5;
  return c;
}

std::vector<double> Vec(const Tensor& t) { return {t.values().begin(), t.values().end()}; }

double MaxDiff(const Tensor& a, const Tensor& b) {
  double m = 0;
  for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

class ModelTest : public ::testing::Test {
 protected:
  void TearDown() override { ad::Tape::Current().Clear(); }
};

TEST_F(ModelTest, UtteranceEncodingShapeAndDeterminism) {
  Dialogue d = MakeDialogue({{"a", kNone, 5}, {"b", 0, 5}});
  d.utterances[1].tokens = d.utterances[0].tokens;
  TripleGnnModel model(Small(), ModelVocab::Build({d}));
  const Tensor a = model.EncodeUtterance(d, 0), b = model.EncodeUtterance(d, 1);
  EXPECT_EQ(a.shape(), (ad::Shape{5, 6}));
  EXPECT_EQ(Vec(a), Vec(b));
}

TEST_F(ModelTest, UtteranceEncodingIsOrderSensitive) {
  Dialogue d = MakeDialogue({{"a", kNone, 4}, {"b", 0, 4}});
  d.utterances[1].tokens = d.utterances[0].tokens;
  std::swap(d.utterances[1].tokens[0], d.utterances[1].tokens[3]);
  TripleGnnModel model(Small(), ModelVocab::Build({d}));
  const Tensor a = model.EncodeUtterance(d, 0), b = model.EncodeUtterance(d, 1);
  // Token 1 has the same word in both orders but a different context.
  const int r[] = {1};
  EXPECT_GT(MaxDiff(ad::GatherRows(a, r), ad::GatherRows(b, r)), 1e-9);
}

TEST_F(ModelTest, ThreadEncoding) {
  const Dialogue one = MakeDialogue({{"a", kNone, 3}});
  TripleGnnModel m1(Small(), ModelVocab::Build({one}));
  EXPECT_EQ(m1.EncodeThread(one, Thread{{0}}).shape(), m1.EncodeUtterance(one, 0).shape());

  const Dialogue d = MakeDialogue({{"a", kNone, 3}, {"b", 0, 2}});
  TripleGnnModel model(Small(), ModelVocab::Build({d}));
  const Tensor g = model.EncodeThread(d, Thread{{0, 1}});
  EXPECT_EQ(g.shape(), (ad::Shape{5, 6}));
  const Tensor lone = model.EncodeUtterance(d, 1);
  const int pos4[] = {4}, row1[] = {1};
  EXPECT_GT(MaxDiff(ad::GatherRows(g, pos4), ad::GatherRows(lone, row1)), 1e-9);
}

TEST_F(ModelTest, PosPipeline) {
  Dialogue d = MakeDialogue({{"a", kNone, 4}});
  for (Token& t : d.utterances[0].tokens) t.pos = "NN";
  TripleGnnModel model(Small(), ModelVocab::Build({d}));
  const Utterance& u = d.utterances[0];
  const Tensor e = model.PosEmbeddings(u);
  const Tensor c = model.PosPipeline(u);
  EXPECT_EQ(c.shape(), (ad::Shape{4, 5}));
  const int r0[] = {0}, r1[] = {1}, r3[] = {3};
  EXPECT_EQ(Vec(ad::GatherRows(e, r0)), Vec(ad::GatherRows(e, r3)));
  EXPECT_GT(MaxDiff(ad::GatherRows(c, r0), ad::GatherRows(c, r1)), 1e-9);
  EXPECT_GT(MaxDiff(ad::GatherRows(c, r0), ad::GatherRows(c, r3)), 1e-9);

  ad::Backward(ad::Sum(ad::Mul(c, c)));
  const ad::Parameter* table = model.params().Find("syn.pos_embedding");
  ASSERT_NE(table, nullptr);
  double norm = 0;
  for (double g : table->value.grad()) norm += std::abs(g);
  EXPECT_GT(norm, 0.0);
}

TEST_F(ModelTest, ForwardShapesAndNormalization) {
  const Dialogue d = MakeDialogue({{"a", kNone, 2}, {"b", 0, 1}});
  TripleGnnModel model(Small(), ModelVocab::Build({d}));
  const ForwardResult r = model.Forward(d);
  EXPECT_EQ(r.n_tokens, 3);
  EXPECT_EQ(r.entity.shape(), (ad::Shape{9, 4}));
  EXPECT_EQ(r.pair.shape(), (ad::Shape{9, 3}));
  EXPECT_EQ(r.polarity.shape(), (ad::Shape{9, 4}));
  EXPECT_EQ(r.dialogue.shape(), (ad::Shape{3, 6}));
  EXPECT_EQ(r.speaker.shape(), (ad::Shape{2, 6}));
  for (const Tensor* t : {&r.entity, &r.pair, &r.polarity}) {
    for (int c = 0; c < t->rows(); ++c) {
      double s = 0;
      for (int l = 0; l < t->cols(); ++l) s += t->at(c, l);
      EXPECT_NEAR(s, 1.0, 1e-9);
    }
  }
}

TEST_F(ModelTest, ForwardIsDeterministicAndDropoutIsKeyedByStep) {
  const Dialogue d = SynthCorpus(3, 1).dialogues[0];
  TripleGnnModel model(Small(), ModelVocab::Build({d}));
  EXPECT_EQ(Vec(model.Forward(d).entity), Vec(model.Forward(d).entity));
  EXPECT_EQ(Vec(model.Forward(d, true, 4).entity), Vec(model.Forward(d, true, 4).entity));
  EXPECT_NE(Vec(model.Forward(d, true, 4).entity), Vec(model.Forward(d, true, 5).entity));
  EXPECT_NE(Vec(model.Forward(d, true, 4).entity), Vec(model.Forward(d).entity));
}

TEST_F(ModelTest, StructureAttentionMasksCrossBranchPairs) {
  const Dialogue d = MakeDialogue({{"a", kNone, 1}, {"b", 0, 1}, {"c", 1, 1}, {"a", 0, 1}});
  TripleGnnModel model(Small(), ModelVocab::Build({d}));
  const ForwardResult r = model.Forward(d);
  ASSERT_EQ(r.structure_attention.size(), 1u);
  EXPECT_EQ(r.structure_attention[0].at(2, 3), 0.0);
  EXPECT_EQ(r.structure_attention[0].at(3, 2), 0.0);
  EXPECT_EQ(r.structure_attention[0].at(3, 1), 0.0);
  EXPECT_GT(r.speaker_attention[0].at(2, 3), 0.0);
}

std::set<std::string> Prefixes(const TripleGnnModel& m) {
  std::set<std::string> out;
  for (const auto& p : m.params().params()) out.insert(p.name.substr(0, p.name.find('.')));
  return out;
}

TEST_F(ModelTest, AblationsDropParametersAndZeroOutputs) {
  const Dialogue d = SynthCorpus(5, 1).dialogues[0];
  const ModelVocab vocab = ModelVocab::Build({d});
  TripleGnnModel full(Small(), vocab);
  EXPECT_EQ(Prefixes(full), (std::set<std::string>{"aggregate", "encoder", "grid", "interaction",
                                                   "spk_gat", "str_gat", "syn"}));
  ModelConfig c = Small();
  c.use_spk_gat = false;
  TripleGnnModel no_spk(c, vocab);
  EXPECT_FALSE(Prefixes(no_spk).count("spk_gat"));
  EXPECT_FALSE(Prefixes(no_spk).count("interaction"));
  const ForwardResult r = no_spk.Forward(d);
  for (double v : r.speaker.values()) EXPECT_EQ(v, 0.0);
  EXPECT_TRUE(r.speaker_attention.empty());
  EXPECT_FALSE(r.interaction_a1.defined());

  c.use_str_gat = false;
  c.use_syn_gcn = false;
  TripleGnnModel bare(c, vocab);
  EXPECT_EQ(Prefixes(bare), (std::set<std::string>{"aggregate", "encoder", "grid"}));
  const ForwardResult b = bare.Forward(d);
  for (const Tensor& s : b.syntactic) {
    for (double v : s.values()) EXPECT_EQ(v, 0.0);
  }
  EXPECT_THROW(bare.PosEmbeddings(d.utterances[0]), Error);
}

TEST_F(ModelTest, SymmetricScoresHaveNoKeyParameters) {
  const Dialogue d = SynthCorpus(5, 1).dialogues[0];
  ModelConfig c = Small();
  c.symmetric_grid_scores = true;
  TripleGnnModel model(c, ModelVocab::Build({d}));
  EXPECT_FALSE(model.params().Contains("grid.entity.0.key.w"));
  TripleGnnModel asym(Small(), ModelVocab::Build({d}));
  EXPECT_TRUE(asym.params().Contains("grid.entity.0.key.w"));
}

TEST_F(ModelTest, AblatedModelPassesGradCheck) {
  const Dialogue d = GradCheckDialogue(3);
  ModelConfig c = GradCheckModelConfig(4);
  c.use_syn_gcn = false;
  c.use_str_gat = false;
  TripleGnnModel model(c, ModelVocab::Build({d}));
  const ad::GradCheckReport r = CheckModelGradients(model, d);
  EXPECT_TRUE(r.passed) << r.max_rel_error;
}

TEST_F(ModelTest, NormalizedSyntacticGraphAndFullyConnectedStructure) {
  const Dialogue d = SynthCorpus(6, 1).dialogues[0];
  ModelConfig c = Small();
  c.normalize_syn = true;
  c.structure_mode = StructureMode::kFullyConnected;
  TripleGnnModel model(c, ModelVocab::Build({d}));
  const ForwardResult r = model.Forward(d);
  for (int i = 0; i < d.size(); ++i) {
    for (int j = 0; j < d.size(); ++j) EXPECT_GT(r.structure_attention[0].at(i, j), 0.0);
  }
}

TEST_F(ModelTest, PrecomputedEncoder) {
  const Dialogue d = MakeDialogue({{"a", kNone, 2}, {"b", 0, 1}}, {}, "x");
  const nlohmann::json vectors = {
      {"dim", 3}, {"dialogues", {{"x", {{{1, 0, 0}, {0, 1, 0}}, {{0, 0, 1}}}}}}};
  TripleGnnModel model(Small(), ModelVocab::Build({d}),
                       [&](ad::ParamStore& store, const ModelVocab&) {
                         return std::make_unique<PrecomputedEncoder>(store, vectors, 6);
                       });
  EXPECT_EQ(model.EncodeUtterance(d, 0).shape(), (ad::Shape{2, 6}));
  EXPECT_EQ(model.EncodeThread(d, Thread{{0, 1}}).shape(), (ad::Shape{3, 6}));
  EXPECT_TRUE(model.params().Contains("encoder.proj.w"));
  EXPECT_FALSE(model.params().Contains("encoder.embedding"));
  EXPECT_EQ(model.Forward(d).n_tokens, 3);
  const Dialogue other = MakeDialogue({{"a", kNone, 2}}, {}, "missing");
  try {
    model.EncodeUtterance(other, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedFile);
  }
}

}  // namespace
}  // namespace diaquad
