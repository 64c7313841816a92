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

#include "diaquad/model.h"

#include "diaquad/autodiff/ops.h"
#include "diaquad/error.h"
#include "diaquad/graphs.h"

namespace diaquad {

using namespace ad;

namespace {

// Dropout site ids; the per-utterance/thread index is added on top.
constexpr uint64_t kSiteUtterance = 100000;
constexpr uint64_t kSiteThread = 200000;
constexpr uint64_t kSiteSpeaker = 300000;
constexpr uint64_t kSiteStructure = 300001;
constexpr uint64_t kSiteSyntactic = 400000;

std::vector<double> Values(const Tensor& t) {
  return {t.values().begin(), t.values().end()};
}

GatHead MakeHead(ParamStore& store, const std::string& prefix, int d,
                 int relations, int edge_dim) {
  GatHead h;
  h.w_src = store.Create(prefix + ".w_src", {d, d}, ParamGroup::kOther);
  h.w_dst = store.Create(prefix + ".w_dst", {d, d}, ParamGroup::kOther);
  h.w_val = store.Create(prefix + ".w_val", {d, d}, ParamGroup::kOther);
  h.a_src = store.Create(prefix + ".a_src", {d, 1}, ParamGroup::kOther);
  h.a_dst = store.Create(prefix + ".a_dst", {d, 1}, ParamGroup::kOther);
  h.a_edge = store.Create(prefix + ".a_edge", {edge_dim, 1}, ParamGroup::kOther);
  h.edge_emb = store.Create(prefix + ".edge_emb", {relations, edge_dim},
                            ParamGroup::kOther, Init::kUniform);
  return h;
}

std::vector<LabelScorer> MakeScorers(ParamStore& store, const std::string& head,
                                     int labels, int d, int m, bool symmetric) {
  std::vector<LabelScorer> out;
  for (int l = 0; l < labels; ++l) {
    const std::string prefix = head + "." + std::to_string(l);
    LabelScorer s;
    s.hidden = Linear::Create(store, prefix + ".hidden", d, m);
    s.query = Linear::Create(store, prefix + ".query", m, m);
    if (!symmetric) s.key = Linear::Create(store, prefix + ".key", m, m);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

ProbGrids ForwardResult::ToProbGrids() const {
  return ProbGrids{n_tokens, Values(entity), Values(pair), Values(polarity)};
}

TripleGnnModel::TripleGnnModel(ModelConfig config, ModelVocab vocab)
    : config_(std::move(config)), vocab_(std::move(vocab)), store_(config_.seed) {
  config_.Validate();
  encoder_ = std::make_unique<BiLstmEncoder>(store_, vocab_, config_.word_dim,
                                             config_.encoder_hidden,
                                             config_.hidden);
  Build();
}

TripleGnnModel::TripleGnnModel(
    ModelConfig config, ModelVocab vocab,
    const std::function<std::unique_ptr<ContextualEncoder>(ParamStore&,
                                                           const ModelVocab&)>&
        make_encoder)
    : config_(std::move(config)), vocab_(std::move(vocab)), store_(config_.seed) {
  config_.Validate();
  encoder_ = make_encoder(store_, vocab_);
  Build();
}

void TripleGnnModel::Build() {
  const ModelConfig& c = config_;
  if (c.use_syn_gcn) {
    pos_embedding_ = store_.Create("syn.pos_embedding", {vocab_.pos.size(), c.pos_dim},
                                   ParamGroup::kOther, Init::kUniform);
    pos_forward_ = LstmWeights::Create(store_, "syn.lstm_fwd", c.pos_dim,
                                       c.pos_hidden, ParamGroup::kOther);
    pos_backward_ = LstmWeights::Create(store_, "syn.lstm_bwd", c.pos_dim,
                                        c.pos_hidden, ParamGroup::kOther);
    pos_project_ = Linear::Create(store_, "syn.proj", 2 * c.pos_hidden, c.pos_hidden);
    for (int l = 0; l < c.gcn_layers; ++l) {
      const std::string prefix = "syn.gcn" + std::to_string(l);
      gcn_.push_back(GcnLayer{
          store_.Create(prefix + ".w", {c.pos_hidden, c.pos_hidden}, ParamGroup::kOther),
          store_.Create(prefix + ".b", {1, c.pos_hidden}, ParamGroup::kOther,
                        Init::kZeros)});
    }
  }
  for (int h = 0; h < c.gat_heads; ++h) {
    if (c.use_spk_gat) {
      speaker_heads_.push_back(MakeHead(store_, "spk_gat.head" + std::to_string(h),
                                        c.hidden, kNumSpeakerRelations, c.edge_dim));
    }
    if (c.use_str_gat) {
      structure_heads_.push_back(MakeHead(store_, "str_gat.head" + std::to_string(h),
                                          c.hidden, kNumStructureRelations,
                                          c.edge_dim));
    }
  }
  if (c.use_spk_gat && c.use_str_gat) {
    interaction_w1_ = store_.Create("interaction.w1", {c.hidden, c.hidden},
                                    ParamGroup::kOther);
    interaction_w2_ = store_.Create("interaction.w2", {c.hidden, c.hidden},
                                    ParamGroup::kOther);
  }
  aggregate_.tri = Linear::Create(store_, "aggregate.tri",
                                  c.pos_hidden + 2 * c.hidden, c.hidden);
  aggregate_.thread = Linear::Create(store_, "aggregate.thread", 2 * c.hidden,
                                     c.hidden);
  entity_scorers_ = MakeScorers(store_, "grid.entity", kEntityLabels, c.hidden,
                                c.mlp_dim, c.symmetric_grid_scores);
  pair_scorers_ = MakeScorers(store_, "grid.pair", kPairLabels, c.hidden,
                              c.mlp_dim, c.symmetric_grid_scores);
  polarity_scorers_ = MakeScorers(store_, "grid.polarity", kPolarityLabels,
                                  c.hidden, c.mlp_dim, c.symmetric_grid_scores);
}

std::vector<int> TripleGnnModel::PosIds(const Utterance& u) const {
  std::vector<int> ids;
  for (const Token& t : u.tokens) ids.push_back(vocab_.pos.Lookup(t.pos));
  return ids;
}

Tensor TripleGnnModel::EncodeUtterance(const Dialogue& d, int utterance) const {
  return encoder_->EncodeUtterance(d, utterance);
}

Tensor TripleGnnModel::EncodeThread(const Dialogue& d, const Thread& thread) const {
  return encoder_->EncodeThread(d, thread);
}

Tensor TripleGnnModel::PosEmbeddings(const Utterance& u) const {
  if (!config_.use_syn_gcn) {
    throw Error(ErrorCode::kInvariant, "syn-gcn branch is disabled");
  }
  return EmbeddingLookup(pos_embedding_, PosIds(u));
}

Tensor TripleGnnModel::PosPipeline(const Utterance& u) const {
  return pos_project_(BiLstm(PosEmbeddings(u), pos_forward_, pos_backward_));
}

Tensor TripleGnnModel::SyntacticFeatures(const Utterance& u) const {
  if (!config_.use_syn_gcn) return Tensor::Zeros({u.size(), config_.pos_hidden});
  SynGraph graph = BuildSyntacticGraph(u);
  if (config_.normalize_syn) graph = NormalizeSyntacticGraph(graph);
  return SynGcnForward(graph, PosPipeline(u), gcn_);
}

ForwardResult TripleGnnModel::Forward(const Dialogue& d, bool train,
                                      uint64_t step) const {
  const ModelConfig& c = config_;
  const GlobalTokenMap map(d);
  const std::vector<Thread> threads = ExtractThreads(d);
  const int n_utt = d.size();
  auto drop = [&](const Tensor& t, uint64_t site) {
    return Dropout(t, c.dropout, train, DropoutKey{c.seed, site, step});
  };

  ForwardResult r;
  r.n_tokens = map.size();

  std::vector<Tensor> pooled;
  for (int i = 0; i < n_utt; ++i) {
    const Tensor h = drop(EncodeUtterance(d, i), kSiteUtterance + i);
    r.utterance_features.push_back(h);
    const int n_i = h.rows();
    pooled.push_back(MatMul(Tensor::Full({1, n_i}, 1.0 / n_i), h));
    r.syntactic.push_back(
        c.use_syn_gcn ? drop(SyntacticFeatures(d.utterances[i]), kSiteSyntactic + i)
                      : SyntacticFeatures(d.utterances[i]));
  }
  const Tensor nodes = ConcatRows(pooled);

  Tensor spk = Tensor::Zeros({n_utt, c.hidden});
  Tensor str = Tensor::Zeros({n_utt, c.hidden});
  if (c.use_spk_gat) {
    GatOutput g = GatForward(ToTypedAdjacency(BuildSpeakerGraph(d)), nodes,
                             speaker_heads_, c.leaky_slope);
    spk = drop(g.output, kSiteSpeaker);
    r.speaker_attention = std::move(g.attention);
  }
  if (c.use_str_gat) {
    GatOutput g = GatForward(
        ToTypedAdjacency(BuildStructureGraph(d, threads, c.structure_mode)), nodes,
        structure_heads_, c.leaky_slope);
    str = drop(g.output, kSiteStructure);
    r.structure_attention = std::move(g.attention);
  }
  if (c.use_spk_gat && c.use_str_gat) {
    InteractionOutput io = Interact(spk, str, interaction_w1_, interaction_w2_);
    spk = io.speaker;
    str = io.structure;
    r.interaction_a1 = io.a1;
    r.interaction_a2 = io.a2;
  }
  r.speaker = spk;
  r.structure = str;

  for (size_t t = 0; t < threads.size(); ++t) {
    r.thread_features.push_back(
        drop(EncodeThread(d, threads[t]), kSiteThread + t));
  }
  r.dialogue = Aggregate(r.syntactic, spk, str, r.thread_features, threads, map,
                         aggregate_);
  r.entity = GridHeadScores(r.dialogue, entity_scorers_, c.symmetric_grid_scores);
  r.pair = GridHeadScores(r.dialogue, pair_scorers_, c.symmetric_grid_scores);
  r.polarity =
      GridHeadScores(r.dialogue, polarity_scorers_, c.symmetric_grid_scores);
  return r;
}

}  // namespace diaquad
