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

#ifndef DIAQUAD_TRAINER_H_
#define DIAQUAD_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "diaquad/config.h"
#include "diaquad/corpus.h"
#include "diaquad/metrics.h"
#include "diaquad/model.h"
#include "json.hpp"

namespace diaquad {

inline constexpr int kLogFormatVersion = 1;

// Encoder choice recorded with the model so checkpoints can rebuild it.
struct EncoderSpec {
  std::string kind = "bilstm";      // "bilstm" or "precomputed"
  std::filesystem::path vectors;    // precomputed token vectors

  nlohmann::json ToJson() const;
  static EncoderSpec FromJson(const nlohmann::json& j);
};

std::unique_ptr<TripleGnnModel> MakeModel(const ModelConfig& config,
                                          const ModelVocab& vocab,
                                          const EncoderSpec& encoder = {});

struct TrainOptions {
  int epochs = 30;
  double encoder_lr = 1e-5;
  double other_lr = 1e-3;
  uint64_t seed = 7;   // shuffling
  bool shuffle = true;
  bool record_seconds = true;  // false writes 0 so logs compare byte-exact
  std::filesystem::path out_dir;  // empty: nothing is written

  static TrainOptions FromConfig(const ConfigMap& c);
  ConfigMap ToConfig() const;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  EvalReport dev;
  double seconds = 0.0;

  nlohmann::json ToJson() const;
};

struct TrainResult {
  std::vector<EpochLog> epochs;
  double initial_loss = 0.0;  // mean loss before the first update, dropout off
  int best_epoch = 0;
  double best_dev_micro_f1 = 0.0;
};

// Called after every epoch, e.g. to stream the log.
using EpochCallback = std::function<void(const EpochLog&)>;

// Batch-size-1 Adam training. Every epoch is evaluated on dev; the best dev
// micro-F1 (ties keep the earlier epoch) is saved as best.ckpt.json. With an
// empty dev set the training set is used for selection. The run header is
// written as the first line of train_log.jsonl.
TrainResult Train(TripleGnnModel& model, const std::vector<Dialogue>& train,
                  const std::vector<Dialogue>& dev, const TrainOptions& options,
                  const nlohmann::json& run_header = nlohmann::json::object(),
                  const EpochCallback& on_epoch = nullptr,
                  const EncoderSpec& encoder = {});

// Mean loss with dropout off, no tape.
double MeanLoss(const TripleGnnModel& model, const std::vector<Dialogue>& data);

std::vector<DialogueQuads> Predict(const TripleGnnModel& model,
                                   const std::vector<Dialogue>& dialogues);

// Checkpoint with model configuration, vocabulary and encoder spec.
void SaveModel(const std::filesystem::path& path, const TripleGnnModel& model,
               const EncoderSpec& encoder, const nlohmann::json& extra);
std::unique_ptr<TripleGnnModel> LoadModel(const std::filesystem::path& path);

}  // namespace diaquad

#endif  // DIAQUAD_TRAINER_H_
