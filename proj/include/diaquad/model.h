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

#ifndef DIAQUAD_MODEL_H_
#define DIAQUAD_MODEL_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "diaquad/autodiff/lstm.h"
#include "diaquad/autodiff/params.h"
#include "diaquad/corpus.h"
#include "diaquad/encoder.h"
#include "diaquad/grid.h"
#include "diaquad/layers.h"
#include "diaquad/model_config.h"

namespace diaquad {

// Everything one forward pass produces. Probability tensors are
// (N_sum^2 x labels) with cell (i, j) at row i * N_sum + j.
struct ForwardResult {
  int n_tokens = 0;
  Tensor entity;
  Tensor pair;
  Tensor polarity;

  // Intermediates, kept for inspection and tests.
  std::vector<Tensor> utterance_features;  // n_i x d
  std::vector<Tensor> thread_features;     // thread tokens x d
  std::vector<Tensor> syntactic;           // n_i x d_l
  Tensor speaker;                          // N x d, after interaction
  Tensor structure;                        // N x d, after interaction
  std::vector<Tensor> speaker_attention;   // per head, N x N
  std::vector<Tensor> structure_attention;
  Tensor interaction_a1;
  Tensor interaction_a2;
  Tensor dialogue;                         // N_sum x d

  ProbGrids ToProbGrids() const;
};

// Encoder + Syn-GCN + speaker/structure GATs + interaction + aggregation +
// three grid heads. Parameters of disabled modules are never created.
class TripleGnnModel {
 public:
  TripleGnnModel(ModelConfig config, ModelVocab vocab);
  // Uses the given encoder factory output instead of the BiLSTM encoder;
  // make_encoder receives the model's parameter store.
  TripleGnnModel(ModelConfig config, ModelVocab vocab,
                 const std::function<std::unique_ptr<ContextualEncoder>(
                     ad::ParamStore&, const ModelVocab&)>& make_encoder);

  TripleGnnModel(const TripleGnnModel&) = delete;
  TripleGnnModel& operator=(const TripleGnnModel&) = delete;

  // train enables dropout keyed by (config.seed, layer, step).
  ForwardResult Forward(const Dialogue& d, bool train = false,
                        uint64_t step = 0) const;

  // Individual stages; all deterministic when train is false.
  Tensor EncodeUtterance(const Dialogue& d, int utterance) const;
  Tensor EncodeThread(const Dialogue& d, const Thread& thread) const;
  Tensor PosPipeline(const Utterance& u) const;        // n_i x d_l
  Tensor PosEmbeddings(const Utterance& u) const;      // n_i x d_e
  Tensor SyntacticFeatures(const Utterance& u) const;  // n_i x d_l

  const ModelConfig& config() const { return config_; }
  const ModelVocab& vocab() const { return vocab_; }
  ad::ParamStore& params() { return store_; }
  const ad::ParamStore& params() const { return store_; }

 private:
  void Build();
  std::vector<int> PosIds(const Utterance& u) const;

  ModelConfig config_;
  ModelVocab vocab_;
  ad::ParamStore store_;
  std::unique_ptr<ContextualEncoder> encoder_;

  // Syn-GCN branch.
  Tensor pos_embedding_;
  ad::LstmWeights pos_forward_;
  ad::LstmWeights pos_backward_;
  Linear pos_project_;
  std::vector<GcnLayer> gcn_;

  std::vector<GatHead> speaker_heads_;
  std::vector<GatHead> structure_heads_;
  Tensor interaction_w1_;
  Tensor interaction_w2_;

  AggregateParams aggregate_;
  std::vector<LabelScorer> entity_scorers_;
  std::vector<LabelScorer> pair_scorers_;
  std::vector<LabelScorer> polarity_scorers_;
};

}  // namespace diaquad

#endif  // DIAQUAD_MODEL_H_
