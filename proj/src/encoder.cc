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

#include "diaquad/encoder.h"

#include <fstream>

#include "diaquad/autodiff/ops.h"
#include "diaquad/error.h"

namespace diaquad {

using namespace ad;
using nlohmann::json;

ModelVocab ModelVocab::Build(const std::vector<Dialogue>& corpus) {
  ModelVocab v;
  for (const Dialogue& d : corpus) {
    for (const Utterance& u : d.utterances) {
      for (const Token& t : u.tokens) {
        v.words.Intern(t.text);
        v.pos.Intern(t.pos);
      }
    }
  }
  return v;
}

json ModelVocab::ToJson() const {
  return {{"words", words.ToJson()}, {"pos", pos.ToJson()}};
}

ModelVocab ModelVocab::FromJson(const json& j) {
  ModelVocab v;
  v.words = Vocabulary::FromJson(j.at("words"));
  v.pos = Vocabulary::FromJson(j.at("pos"));
  if (v.words.size() < 3 || v.words.Name(0) != kUnknownToken ||
      v.words.Name(1) != kClsToken || v.words.Name(2) != kSepToken ||
      v.pos.size() < 1 || v.pos.Name(0) != kUnknownToken) {
    throw Error(ErrorCode::kMalformedFile, "vocabulary lacks reserved entries");
  }
  return v;
}

BiLstmEncoder::BiLstmEncoder(ParamStore& store, const ModelVocab& vocab,
                             int word_dim, int hidden, int out_dim)
    : vocab_(vocab) {
  embedding_ = store.Create("encoder.embedding", {vocab.words.size(), word_dim},
                            ParamGroup::kEncoder, Init::kUniform);
  forward_ = LstmWeights::Create(store, "encoder.lstm_fwd", word_dim, hidden,
                                 ParamGroup::kEncoder);
  backward_ = LstmWeights::Create(store, "encoder.lstm_bwd", word_dim, hidden,
                                  ParamGroup::kEncoder);
  project_ = Linear::Create(store, "encoder.proj", 2 * hidden, out_dim,
                            ParamGroup::kEncoder);
}

Tensor BiLstmEncoder::EncodeIds(const std::vector<int>& ids,
                                const std::vector<int>& real) const {
  const Tensor states = BiLstm(EmbeddingLookup(embedding_, ids), forward_, backward_);
  return project_(GatherRows(states, real));
}

Tensor BiLstmEncoder::EncodeUtterance(const Dialogue& d, int utterance) const {
  const Utterance& u = d.utterances.at(utterance);
  std::vector<int> ids{vocab_.words.Lookup(kClsToken)};
  std::vector<int> real;
  for (const Token& t : u.tokens) {
    real.push_back(static_cast<int>(ids.size()));
    ids.push_back(vocab_.words.Lookup(t.text));
  }
  ids.push_back(vocab_.words.Lookup(kSepToken));
  return EncodeIds(ids, real);
}

Tensor BiLstmEncoder::EncodeThread(const Dialogue& d, const Thread& thread) const {
  std::vector<int> ids{vocab_.words.Lookup(kClsToken)};
  std::vector<int> real;
  for (int m : thread.members) {
    for (const Token& t : d.utterances.at(m).tokens) {
      real.push_back(static_cast<int>(ids.size()));
      ids.push_back(vocab_.words.Lookup(t.text));
    }
    ids.push_back(vocab_.words.Lookup(kSepToken));
  }
  return EncodeIds(ids, real);
}

namespace {

json ReadJsonFile(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::kIo, "cannot open vectors file " + file.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedFile, file.string() + ": " + e.what());
  }
}

}  // namespace

PrecomputedEncoder::PrecomputedEncoder(ParamStore& store,
                                       const std::filesystem::path& file,
                                       int out_dim)
    : PrecomputedEncoder(store, ReadJsonFile(file), out_dim) {}

PrecomputedEncoder::PrecomputedEncoder(ParamStore& store, const json& vectors,
                                       int out_dim) {
  if (!vectors.contains("dim") || !vectors.contains("dialogues")) {
    throw Error(ErrorCode::kMalformedFile, "vectors file needs dim and dialogues");
  }
  dim_ = vectors.at("dim").get<int>();
  if (dim_ < 1) throw Error(ErrorCode::kMalformedFile, "vector dim must be >= 1");
  for (auto it = vectors.at("dialogues").begin();
       it != vectors.at("dialogues").end(); ++it) {
    std::vector<std::vector<double>> per_utt;
    for (const json& utt : it.value()) {
      std::vector<double> flat;
      for (const json& tok : utt) {
        const auto v = tok.get<std::vector<double>>();
        if (static_cast<int>(v.size()) != dim_) {
          throw Error(ErrorCode::kMalformedFile,
                      "dialogue " + it.key() + ": vector of size " +
                          std::to_string(v.size()) + ", expected " +
                          std::to_string(dim_));
        }
        flat.insert(flat.end(), v.begin(), v.end());
      }
      per_utt.push_back(std::move(flat));
    }
    vectors_.emplace(it.key(), std::move(per_utt));
  }
  project_ = Linear::Create(store, "encoder.proj", dim_, out_dim,
                            ParamGroup::kEncoder);
}

Tensor PrecomputedEncoder::Raw(const Dialogue& d, int utterance) const {
  auto it = vectors_.find(d.id);
  if (it == vectors_.end() || utterance >= static_cast<int>(it->second.size())) {
    throw Error(ErrorCode::kMalformedFile,
                "no precomputed vectors for " + d.id + " utterance " +
                    std::to_string(utterance));
  }
  const std::vector<double>& flat = it->second[utterance];
  const int n = d.utterances.at(utterance).size();
  if (static_cast<int>(flat.size()) != n * dim_) {
    throw Error(ErrorCode::kMalformedFile,
                "precomputed vectors for " + d.id + " utterance " +
                    std::to_string(utterance) + " do not match its tokens");
  }
  return Tensor::FromValues({n, dim_}, flat);
}

Tensor PrecomputedEncoder::EncodeUtterance(const Dialogue& d, int utterance) const {
  return project_(Raw(d, utterance));
}

Tensor PrecomputedEncoder::EncodeThread(const Dialogue& d,
                                        const Thread& thread) const {
  std::vector<Tensor> parts;
  for (int m : thread.members) parts.push_back(Raw(d, m));
  return project_(ConcatRows(parts));
}

}  // namespace diaquad
