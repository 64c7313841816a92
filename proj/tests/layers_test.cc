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
#include <random>

#include <gtest/gtest.h>

#include "diaquad/autodiff/ops.h"
#include "diaquad/autodiff/params.h"
#include "diaquad/error.h"
#include "diaquad/layers.h"
#include "test_util.h"

namespace diaquad {
namespace {

using ad::Tensor;

Tensor M(ad::Shape shape, std::vector<double> v) {
  return Tensor::FromValues(std::move(shape), std::move(v));
}

Linear Scalar(double w, double b = 0.0) { return Linear{M({1, 1}, {w}), M({1, 1}, {b})}; }

double LRelu(double x) { return x > 0 ? x : 0.2 * x; }

TEST(SynGcn, IdentityCaseIsRelu) {
  SynGraph g{3, {1, 0, 0, 0, 1, 0, 0, 0, 1}};
  const Tensor c = M({3, 2}, {1, -2, -0.5, 3, 0, 4});
  const GcnLayer layer{M({2, 2}, {1, 0, 0, 1}), M({1, 2}, {0, 0})};
  const Tensor h = SynGcnForward(g, c, std::span(&layer, 1));
  const std::vector<double> expected = {1, 0, 0, 3, 0, 4};
  EXPECT_EQ(std::vector<double>(h.values().begin(), h.values().end()), expected);
}

TEST(SynGcn, TwoConnectedNodesByHand) {
  SynGraph g{2, {1, 1, 1, 1}};
  const Tensor c = M({2, 1}, {1, 3});
  const GcnLayer layer{M({1, 1}, {0.5}), M({1, 1}, {-0.5})};
  const GcnLayer layers[] = {layer, layer};
  // Layer 1: 0.5 * (1 + 3) - 0.5 = 1.5 per node; layer 2: 0.5 * 3 - 0.5 = 1.
  const Tensor one = SynGcnForward(g, c, std::span(layers, 1));
  EXPECT_NEAR(one.at(0, 0), 1.5, 1e-12);
  EXPECT_NEAR(one.at(1, 0), 1.5, 1e-12);
  const Tensor two = SynGcnForward(g, c, layers);
  EXPECT_NEAR(two.at(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(two.at(1, 0), 1.0, 1e-12);
}

TEST(SynGcn, SumsNeighbourRows) {
  // Path 0 - 1 - 2: node 0 sees rows 0 and 1 only.
  SynGraph g{3, {1, 1, 0, 1, 1, 1, 0, 1, 1}};
  const Tensor c = M({3, 1}, {1, 10, 100});
  const GcnLayer layer{M({1, 1}, {1}), M({1, 1}, {0})};
  const Tensor h = SynGcnForward(g, c, std::span(&layer, 1));
  EXPECT_EQ(h.at(0, 0), 11);
  EXPECT_EQ(h.at(1, 0), 111);
  EXPECT_EQ(h.at(2, 0), 110);
}

TEST(SynGcn, RejectsEmptyRowAndBadShapes) {
  SynGraph g{2, {1, 0, 0, 0}};
  const GcnLayer layer{M({1, 1}, {1}), M({1, 1}, {0})};
  try {
    SynGcnForward(g, M({2, 1}, {1, 2}), std::span(&layer, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvariant);
  }
  try {
    SynGcnForward(SynGraph{2, {1, 1, 1, 1}}, M({3, 1}, {1, 2, 3}), std::span(&layer, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
}

GatHead ScalarHead() {
  GatHead h;
  h.w_src = M({1, 1}, {2});
  h.w_dst = M({1, 1}, {3});
  h.w_val = M({1, 1}, {0.5});
  h.a_src = M({1, 1}, {1});
  h.a_dst = M({1, 1}, {-1});
  h.a_edge = M({1, 1}, {1});
  h.edge_emb = M({5, 1}, {0.1, 0.2, 0.3, 0.4, 0.5});
  return h;
}

TEST(Gat, SingleNode) {
  const GatHead head = ScalarHead();
  const GatOutput out = GatForward(TypedAdjacency{1, {4}}, M({1, 1}, {1.7}),
                                   std::span(&head, 1), 0.2);
  EXPECT_EQ(out.attention[0].at(0, 0), 1.0);
  EXPECT_NEAR(out.output.at(0, 0), 0.5 * 1.7, 1e-15);
}

TEST(Gat, TwoNodesByHand) {
  const GatHead head = ScalarHead();
  const double h0 = 1, h1 = 2;
  // Types: self-loop (row 4) on the diagonal, 3 and 2 off it.
  const GatOutput out = GatForward(TypedAdjacency{2, {4, 3, 2, 4}}, M({2, 1}, {h0, h1}),
                                   std::span(&head, 1), 0.2);
  const double e00 = LRelu(2 * h0 - 3 * h0 + 0.5), e01 = LRelu(2 * h0 - 3 * h1 + 0.4);
  const double e10 = LRelu(2 * h1 - 3 * h0 + 0.3), e11 = LRelu(2 * h1 - 3 * h1 + 0.5);
  const double a00 = std::exp(e00) / (std::exp(e00) + std::exp(e01));
  const double a10 = std::exp(e10) / (std::exp(e10) + std::exp(e11));
  const Tensor& alpha = out.attention[0];
  EXPECT_NEAR(alpha.at(0, 0), a00, 1e-12);
  EXPECT_NEAR(alpha.at(0, 1), 1 - a00, 1e-12);
  EXPECT_NEAR(alpha.at(1, 0), a10, 1e-12);
  EXPECT_NEAR(out.output.at(0, 0), a00 * 0.5 * h0 + (1 - a00) * 0.5 * h1, 1e-12);
  EXPECT_NEAR(out.output.at(1, 0), a10 * 0.5 * h0 + (1 - a10) * 0.5 * h1, 1e-12);
}

TEST(Gat, MaskedPairsGetExactlyZero) {
  const GatHead head = ScalarHead();
  const GatOutput out = GatForward(TypedAdjacency{3, {0, 1, -1, 2, 0, 1, -1, 2, 0}},
                                   M({3, 1}, {0.3, -0.2, 0.9}), std::span(&head, 1), 0.2);
  EXPECT_EQ(out.attention[0].at(0, 2), 0.0);
  EXPECT_EQ(out.attention[0].at(2, 0), 0.0);
  for (int i = 0; i < 3; ++i) {
    double s = 0;
    for (int j = 0; j < 3; ++j) s += out.attention[0].at(i, j);
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(Gat, HeadsAreAveraged) {
  GatHead a = ScalarHead(), b = ScalarHead();
  b.w_val = M({1, 1}, {1.5});
  const GatHead both[] = {a, b};
  const Tensor nodes = M({2, 1}, {1, 2});
  const TypedAdjacency adj{2, {4, 3, 2, 4}};
  const double single = GatForward(adj, nodes, std::span(&a, 1), 0.2).output.at(1, 0);
  // Same attention, values scale with w_val: mean of 0.5x and 1.5x is 1x.
  EXPECT_NEAR(GatForward(adj, nodes, both, 0.2).output.at(1, 0), 2 * single, 1e-12);
  EXPECT_THROW(GatForward(adj, M({3, 1}, {1, 2, 3}), std::span(&a, 1), 0.2), Error);
}

TEST(Interaction, ZeroWeightGivesColumnMeans) {
  const Tensor spk = M({3, 2}, {1, 2, 3, 4, 5, 9});
  const Tensor str = M({3, 2}, {0, 1, 1, 0, 2, 2});
  const InteractionOutput out = Interact(spk, str, Tensor::Zeros({2, 2}), Tensor::Zeros({2, 2}));
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(out.speaker.at(i, 0), 3.0, 1e-12);
    EXPECT_NEAR(out.speaker.at(i, 1), 5.0, 1e-12);
    EXPECT_NEAR(out.a1.at(i, 1), 1.0 / 3.0, 1e-15);
  }
}

TEST(Interaction, SingleNodeIsIdentity) {
  const InteractionOutput out =
      Interact(M({1, 2}, {1, 2}), M({1, 2}, {3, 4}), M({2, 2}, {1, 2, 3, 4}), M({2, 2}, {1, 0, 0, 1}));
  EXPECT_EQ(out.a1.at(0, 0), 1.0);
  EXPECT_EQ(out.a2.at(0, 0), 1.0);
  EXPECT_EQ(out.speaker.at(0, 1), 2.0);
  EXPECT_EQ(out.structure.at(0, 0), 3.0);
}

TEST(Interaction, TwoNodesByHand) {
  const double s0 = 1, s1 = 2, t0 = 3, t1 = -1, w1 = 0.5, w2 = -1;
  const InteractionOutput out =
      Interact(M({2, 1}, {s0, s1}), M({2, 1}, {t0, t1}), M({1, 1}, {w1}), M({1, 1}, {w2}));
  auto soft = [](double a, double b) { return std::exp(a) / (std::exp(a) + std::exp(b)); };
  const double a1_00 = soft(s0 * w1 * t0, s0 * w1 * t1), a1_10 = soft(s1 * w1 * t0, s1 * w1 * t1);
  const double a2_00 = soft(t0 * w2 * s0, t0 * w2 * s1), a2_10 = soft(t1 * w2 * s0, t1 * w2 * s1);
  EXPECT_NEAR(out.a1.at(0, 0), a1_00, 1e-12);
  EXPECT_NEAR(out.a2.at(1, 0), a2_10, 1e-12);
  EXPECT_NEAR(out.speaker.at(0, 0), a1_00 * s0 + (1 - a1_00) * s1, 1e-12);
  EXPECT_NEAR(out.speaker.at(1, 0), a1_10 * s0 + (1 - a1_10) * s1, 1e-12);
  EXPECT_NEAR(out.structure.at(0, 0), a2_00 * t0 + (1 - a2_00) * t1, 1e-12);
  EXPECT_NEAR(out.structure.at(1, 0), a2_10 * t0 + (1 - a2_10) * t1, 1e-12);
  EXPECT_THROW(Interact(M({2, 1}, {1, 2}), M({1, 1}, {1}), M({1, 1}, {1}), M({1, 1}, {1})),
               Error);
}

AggregateParams RandomAggregate(ad::ParamStore& store, int d_l, int d) {
  AggregateParams p;
  p.tri = Linear::Create(store, "tri", d_l + 2 * d, d);
  p.thread = Linear::Create(store, "thread", 2 * d, d);
  for (auto& param : store.params()) {
    for (double& v : param.value.mutable_values()) v += 0.01;  // nonzero biases
  }
  return p;
}

TEST(Aggregate, SingleUtteranceShape) {
  ad::ParamStore store(3);
  const AggregateParams p = RandomAggregate(store, 2, 3);
  const Dialogue d = testing::MakeDialogue({{"a", kNone, 4}});
  std::mt19937_64 rng(1);
  const Tensor syn[] = {Tensor::Full({4, 2}, 0.3)};
  const Tensor g[] = {Tensor::Full({4, 3}, -0.1)};
  const Tensor out = Aggregate(syn, Tensor::Full({1, 3}, 0.2), Tensor::Full({1, 3}, 0.4), g,
                               ExtractThreads(d), GlobalTokenMap(d), p);
  EXPECT_EQ(out.shape(), (ad::Shape{4, 3}));
}

TEST(Aggregate, SharedTokensAverageTheirThreadCopies) {
  ad::ParamStore store(4);
  const int d_l = 2, d = 3;
  const AggregateParams p = RandomAggregate(store, d_l, d);
  // Threads [0, 1] and [0, 2]; utterance 0 lies on both.
  const Dialogue dlg = testing::MakeDialogue({{"a", kNone, 2}, {"b", 0, 1}, {"c", 0, 2}});
  const auto threads = ExtractThreads(dlg);
  ASSERT_EQ(threads.size(), 2u);
  const GlobalTokenMap map(dlg);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  auto rnd = [&](int r, int c) {
    std::vector<double> v(r * c);
    for (double& x : v) x = u(rng);
    return M({r, c}, v);
  };
  const std::vector<Tensor> syn = {rnd(2, d_l), rnd(1, d_l), rnd(2, d_l)};
  const Tensor spk = rnd(3, d), str = rnd(3, d);
  const std::vector<Tensor> g = {rnd(3, d), rnd(4, d)};
  const Tensor out = Aggregate(syn, spk, str, g, threads, map, p);

  auto tri_row = [&](int utt, int k) {
    const int r[] = {k}, s[] = {utt};
    const Tensor parts[] = {ad::GatherRows(syn[utt], r), ad::GatherRows(spk, s),
                            ad::GatherRows(str, s)};
    return p.tri(ad::ConcatCols(parts));
  };
  auto thread_row = [&](int t, int pos, const Tensor& tri) {
    const int r[] = {pos};
    const Tensor parts[] = {tri, ad::GatherRows(g[t], r)};
    return p.thread(ad::ConcatCols(parts));
  };
  for (int k = 0; k < 2; ++k) {
    const Tensor tri = tri_row(0, k);
    const Tensor a = thread_row(0, k, tri), b = thread_row(1, k, tri);
    for (int c = 0; c < d; ++c) {
      EXPECT_NEAR(out.at(k, c), 0.5 * (a.at(0, c) + b.at(0, c)), 1e-12);
    }
  }
  // Utterance 2 token 1 sits at position 3 of thread 1 and only there.
  const Tensor only = thread_row(1, 3, tri_row(2, 1));
  for (int c = 0; c < d; ++c) EXPECT_NEAR(out.at(map.ToGlobal(2, 1), c), only.at(0, c), 1e-12);

  // Zeroing the speaker features changes the output.
  const Tensor zeroed = Aggregate(syn, Tensor::Zeros({3, d}), str, g, threads, map, p);
  double diff = 0;
  for (int i = 0; i < out.size(); ++i) diff += std::abs(out.values()[i] - zeroed.values()[i]);
  EXPECT_GT(diff, 1e-6);
}

TEST(GridScores, ShapesAndNormalization) {
  ad::ParamStore store(5);
  std::vector<LabelScorer> scorers;
  for (int l = 0; l < 4; ++l) {
    const std::string n = "s" + std::to_string(l);
    scorers.push_back({Linear::Create(store, n + ".h", 3, 4), Linear::Create(store, n + ".q", 4, 4),
                       Linear::Create(store, n + ".k", 4, 4)});
  }
  const Tensor h = M({3, 3}, {1, 0, -1, 0.5, 0.5, 2, -3, 1, 0});
  for (bool symmetric : {false, true}) {
    const Tensor p = GridHeadScores(h, scorers, symmetric);
    ASSERT_EQ(p.shape(), (ad::Shape{9, 4}));
    for (int c = 0; c < 9; ++c) {
      double s = 0;
      for (int l = 0; l < 4; ++l) s += p.at(c, l);
      EXPECT_NEAR(s, 1.0, 1e-9);
    }
  }
  const Tensor sym = GridHeadScores(h, scorers, true);
  for (int l = 0; l < 4; ++l) EXPECT_NEAR(sym.at(0 * 3 + 2, l), sym.at(2 * 3 + 0, l), 1e-15);
  const Tensor asym = GridHeadScores(h, scorers, false);
  EXPECT_GT(std::abs(asym.at(2, 0) - asym.at(6, 0)), 1e-9);
}

TEST(GridScores, OneCellByHand) {
  // d = m = 1; label l has hidden weight a_l, query q_l and key k_l.
  const double a[] = {0.7, -1.2, 0.4}, q[] = {1.5, 0.8, -2.0}, k[] = {0.3, -1.1, 0.9};
  std::vector<LabelScorer> scorers;
  for (int l = 0; l < 3; ++l) scorers.push_back({Scalar(a[l]), Scalar(q[l]), Scalar(k[l])});
  const double h0 = 0.5, h1 = -1.0;
  const Tensor h = M({2, 1}, {h0, h1});
  const Tensor asym = GridHeadScores(h, scorers, false);
  const Tensor sym = GridHeadScores(h, scorers, true);
  double s_asym[3], s_sym[3], z_asym = 0, z_sym = 0;
  for (int l = 0; l < 3; ++l) {
    const double vi = std::tanh(a[l] * h0), vj = std::tanh(a[l] * h1);
    s_asym[l] = std::exp(q[l] * vi * k[l] * vj);
    s_sym[l] = std::exp(q[l] * vi * q[l] * vj);
    z_asym += s_asym[l];
    z_sym += s_sym[l];
  }
  for (int l = 0; l < 3; ++l) {
    EXPECT_NEAR(asym.at(1, l), s_asym[l] / z_asym, 1e-12);  // cell (0, 1)
    EXPECT_NEAR(sym.at(1, l), s_sym[l] / z_sym, 1e-12);
  }
}

}  // namespace
}  // namespace diaquad
