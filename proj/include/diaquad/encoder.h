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

#ifndef DIAQUAD_ENCODER_H_
#define DIAQUAD_ENCODER_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "diaquad/autodiff/lstm.h"
#include "diaquad/autodiff/params.h"
#include "diaquad/corpus.h"
#include "diaquad/layers.h"

namespace diaquad {

inline constexpr const char* kUnknownToken = "<unk>";
inline constexpr const char* kClsToken = "[CLS]";
inline constexpr const char* kSepToken = "[SEP]";

// Word and POS tables shared by the encoder and the POS pipeline; persisted
// with every checkpoint so embedding rows stay stable across runs.
struct ModelVocab {
  Vocabulary words{{kUnknownToken, kClsToken, kSepToken}};
  Vocabulary pos{{kUnknownToken}};

  static ModelVocab Build(const std::vector<Dialogue>& corpus);
  nlohmann::json ToJson() const;
  static ModelVocab FromJson(const nlohmann::json& j);
};

// Produces contextual token features for single utterances and for whole
// threads. Implementations own their parameters through the ParamStore
// handed to them at construction.
class ContextualEncoder {
 public:
  virtual ~ContextualEncoder() = default;
  // n_i x d rows for the real tokens of utterance i.
  virtual Tensor EncodeUtterance(const Dialogue& d, int utterance) const = 0;
  // One row per token of the thread's utterances, in thread order.
  virtual Tensor EncodeThread(const Dialogue& d, const Thread& thread) const = 0;
};

// Trainable word embeddings, a BiLSTM and a projection to d. Inputs are
// wrapped in [CLS] ... [SEP]; threads put [SEP] after every utterance.
class BiLstmEncoder : public ContextualEncoder {
 public:
  BiLstmEncoder(ad::ParamStore& store, const ModelVocab& vocab, int word_dim,
                int hidden, int out_dim);

  Tensor EncodeUtterance(const Dialogue& d, int utterance) const override;
  Tensor EncodeThread(const Dialogue& d, const Thread& thread) const override;

 private:
  // ids include sentinels; real marks rows returned to the caller.
  Tensor EncodeIds(const std::vector<int>& ids, const std::vector<int>& real) const;

  const ModelVocab& vocab_;
  Tensor embedding_;
  ad::LstmWeights forward_;
  ad::LstmWeights backward_;
  Linear project_;
};

// Adapter for token vectors computed offline by an external encoder. The
// file is JSON {"dim": k, "dialogues": {id: [[[k floats] per token] per
// utterance]}}; a trainable projection maps k -> d. Threads concatenate
// their utterances' vectors.
class PrecomputedEncoder : public ContextualEncoder {
 public:
  PrecomputedEncoder(ad::ParamStore& store, const std::filesystem::path& file,
                     int out_dim);
  PrecomputedEncoder(ad::ParamStore& store, const nlohmann::json& vectors,
                     int out_dim);

  int input_dim() const { return dim_; }
  Tensor EncodeUtterance(const Dialogue& d, int utterance) const override;
  Tensor EncodeThread(const Dialogue& d, const Thread& thread) const override;

 private:
  Tensor Raw(const Dialogue& d, int utterance) const;

  int dim_ = 0;
  std::map<std::string, std::vector<std::vector<double>>> vectors_;  // id -> per utterance
  Linear project_;
};

}  // namespace diaquad

#endif  // DIAQUAD_ENCODER_H_
