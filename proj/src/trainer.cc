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

#include "diaquad/trainer.h"

#include <chrono>
#include <fstream>
#include <numeric>
#include <random>

#include "diaquad/autodiff/adam.h"
#include "diaquad/autodiff/checkpoint.h"
#include "diaquad/encoder.h"
#include "diaquad/error.h"
#include "diaquad/grid.h"
#include "diaquad/loss.h"

namespace diaquad {

namespace fs = std::filesystem;

nlohmann::json EncoderSpec::ToJson() const {
  return {{"kind", kind}, {"vectors", vectors.string()}};
}

EncoderSpec EncoderSpec::FromJson(const nlohmann::json& j) {
  EncoderSpec s;
  s.kind = j.value("kind", "bilstm");
  s.vectors = j.value("vectors", "");
  return s;
}

std::unique_ptr<TripleGnnModel> MakeModel(const ModelConfig& config,
                                          const ModelVocab& vocab,
                                          const EncoderSpec& encoder) {
  if (encoder.kind == "bilstm") {
    return std::make_unique<TripleGnnModel>(config, vocab);
  }
  if (encoder.kind == "precomputed") {
    const fs::path file = encoder.vectors;
    const int d = config.hidden;
    return std::make_unique<TripleGnnModel>(
        config, vocab, [&](ad::ParamStore& store, const ModelVocab&) {
          return std::make_unique<PrecomputedEncoder>(store, file, d);
        });
  }
  throw Error(ErrorCode::kBadConfig, "unknown encoder '" + encoder.kind + "'");
}

TrainOptions TrainOptions::FromConfig(const ConfigMap& c) {
  TrainOptions o;
  o.epochs = c.GetInt("epochs", o.epochs);
  o.encoder_lr = c.GetDouble("encoder_lr", o.encoder_lr);
  o.other_lr = c.GetDouble("lr", o.other_lr);
  o.seed = static_cast<uint64_t>(c.GetInt("seed", static_cast<int>(o.seed)));
  o.shuffle = c.GetBool("shuffle", o.shuffle);
  if (o.epochs < 1) throw Error(ErrorCode::kBadConfig, "epochs must be >= 1");
  if (!(o.encoder_lr >= 0.0) || !(o.other_lr >= 0.0)) {
    throw Error(ErrorCode::kBadConfig, "learning rates must be >= 0");
  }
  return o;
}

ConfigMap TrainOptions::ToConfig() const {
  ConfigMap c;
  c.Set("epochs", std::to_string(epochs));
  c.Set("encoder_lr", nlohmann::json(encoder_lr).dump());
  c.Set("lr", nlohmann::json(other_lr).dump());
  c.Set("seed", std::to_string(seed));
  c.Set("shuffle", shuffle ? "true" : "false");
  return c;
}

nlohmann::json EpochLog::ToJson() const {
  return {{"epoch", epoch},
          {"train_loss", train_loss},
          {"dev_micro_f1", dev.micro.f1()},
          {"dev_iden_f1", dev.iden.f1()},
          {"dev_intra_f1", dev.intra.f1()},
          {"dev_inter_f1", dev.inter.f1()},
          {"seconds", seconds}};
}

namespace {

struct Example {
  const Dialogue* dialogue;
  TagGrids gold;
};

std::vector<Example> Prepare(const std::vector<Dialogue>& data) {
  std::vector<Example> out;
  for (const Dialogue& d : data) {
    try {
      out.push_back({&d, EncodeGold(d, GlobalTokenMap(d))});
    } catch (const Error& e) {
      throw Error(e.code(), "dialogue '" + d.id + "': " + e.what());
    }
  }
  return out;
}

// Fisher-Yates with modulo reduction so the order does not depend on the
// standard library's distribution implementation.
void Shuffle(std::vector<size_t>& order, uint64_t seed, int epoch) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<uint64_t>(epoch));
  for (size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng() % i]);
  }
}

nlohmann::json ModelMetadata(const TripleGnnModel& model, const EncoderSpec& encoder) {
  return {{"model_config", model.config().ToConfig().ToJson()},
          {"vocab", model.vocab().ToJson()},
          {"encoder", encoder.ToJson()}};
}

}  // namespace

double MeanLoss(const TripleGnnModel& model, const std::vector<Dialogue>& data) {
  if (data.empty()) return 0.0;
  ad::NoGradGuard no_grad;
  double total = 0.0;
  for (const Example& ex : Prepare(data)) {
    const ForwardResult r = model.Forward(*ex.dialogue);
    total += GridLoss(r, ex.gold, model.config().loss_weights).item();
  }
  return total / static_cast<double>(data.size());
}

std::vector<DialogueQuads> Predict(const TripleGnnModel& model,
                                   const std::vector<Dialogue>& dialogues) {
  ad::NoGradGuard no_grad;
  std::vector<DialogueQuads> out;
  for (const Dialogue& d : dialogues) {
    const ForwardResult r = model.Forward(d);
    out.push_back({d.id, Decode(r.ToProbGrids(), GlobalTokenMap(d))});
  }
  return out;
}

void SaveModel(const fs::path& path, const TripleGnnModel& model,
               const EncoderSpec& encoder, const nlohmann::json& extra) {
  nlohmann::json meta = ModelMetadata(model, encoder);
  for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = it.value();
  ad::SaveCheckpoint(path, model.params(), nullptr, meta);
}

std::unique_ptr<TripleGnnModel> LoadModel(const fs::path& path) {
  const nlohmann::json ckpt = ad::ReadCheckpoint(path);
  const nlohmann::json& meta = ckpt.at("metadata");
  try {
    const ModelConfig config =
        ModelConfig::FromConfig(ConfigMap::FromJson(meta.at("model_config")));
    const ModelVocab vocab = ModelVocab::FromJson(meta.at("vocab"));
    auto model = MakeModel(config, vocab, EncoderSpec::FromJson(
                                              meta.value("encoder", nlohmann::json::object())));
    ad::RestoreParams(ckpt, model->params());
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": " + e.what());
  }
}

TrainResult Train(TripleGnnModel& model, const std::vector<Dialogue>& train,
                  const std::vector<Dialogue>& dev, const TrainOptions& options,
                  const nlohmann::json& run_header, const EpochCallback& on_epoch,
                  const EncoderSpec& encoder) {
  if (train.empty()) throw Error(ErrorCode::kMalformedFile, "training corpus is empty");
  const std::vector<Example> examples = Prepare(train);
  const std::vector<Dialogue>& selection = dev.empty() ? train : dev;
  const std::vector<DialogueQuads> selection_gold = GoldQuads(selection);

  std::ofstream log;
  if (!options.out_dir.empty()) {
    fs::create_directories(options.out_dir);
    log.open(options.out_dir / "train_log.jsonl");
    if (!log) {
      throw Error(ErrorCode::kIo, "cannot write " + (options.out_dir / "train_log.jsonl").string());
    }
    nlohmann::json header = {{"format", "diaquad-train-log"},
                             {"version", kLogFormatVersion},
                             {"run_config", run_header},
                             {"model_config", model.config().ToConfig().ToJson()},
                             {"train_options", options.ToConfig().ToJson()},
                             {"train_dialogues", train.size()},
                             {"dev_dialogues", dev.size()}};
    log << header.dump() << "\n";
  }

  TrainResult result;
  result.initial_loss = MeanLoss(model, train);
  result.best_epoch = 0;
  result.best_dev_micro_f1 = -1.0;

  ad::Adam adam(options.encoder_lr, options.other_lr);
  ad::ParamStore& store = model.params();
  std::vector<size_t> order(examples.size());
  uint64_t step = 0;
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::iota(order.begin(), order.end(), size_t{0});
    if (options.shuffle) Shuffle(order, options.seed, epoch);
    double total = 0.0;
    for (size_t k : order) {
      const Example& ex = examples[k];
      ad::Tape::Current().Clear();
      store.ZeroGrad();
      try {
        const ForwardResult r = model.Forward(*ex.dialogue, /*train=*/true, step);
        const Tensor loss = GridLoss(r, ex.gold, model.config().loss_weights);
        total += loss.item();
        ad::Backward(loss);
      } catch (const Error& e) {
        throw Error(e.code(), "epoch " + std::to_string(epoch) + ", dialogue '" +
                                  ex.dialogue->id + "': " + e.what());
      }
      adam.Step(store);
      ++step;
    }
    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = total / static_cast<double>(examples.size());
    entry.dev = Evaluate(Predict(model, selection), selection_gold);
    const auto stop = std::chrono::steady_clock::now();
    entry.seconds = options.record_seconds
                        ? std::chrono::duration<double>(stop - start).count()
                        : 0.0;
    result.epochs.push_back(entry);
    if (log.is_open()) log << entry.ToJson().dump() << "\n" << std::flush;
    if (on_epoch) on_epoch(entry);

    if (entry.dev.micro.f1() > result.best_dev_micro_f1) {
      result.best_dev_micro_f1 = entry.dev.micro.f1();
      result.best_epoch = epoch;
      if (!options.out_dir.empty()) {
        SaveModel(options.out_dir / "best.ckpt.json", model, encoder,
                  {{"epoch", epoch},
                   {"dev_micro_f1", entry.dev.micro.f1()},
                   {"run_config", run_header}});
      }
    }
  }
  ad::Tape::Current().Clear();
  return result;
}

}  // namespace diaquad
