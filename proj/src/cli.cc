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

#include "diaquad/cli.h"

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "diaquad/config.h"
#include "diaquad/corpus.h"
#include "diaquad/diagnostics.h"
#include "diaquad/error.h"
#include "diaquad/graphs.h"
#include "diaquad/metrics.h"
#include "diaquad/model_config.h"
#include "diaquad/synth.h"
#include "diaquad/trainer.h"
#include "json.hpp"

namespace diaquad::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kEnvPrefix = "DIAQUAD_";

struct CommonOptions {
  std::string config_file;
  std::vector<std::string> sets;
};

// Settings a config file, --set flag or DIAQUAD_ variable may name.
ConfigMap KnownKeys() {
  ConfigMap known = ModelConfig{}.ToConfig();
  known.Merge(TrainOptions{}.ToConfig());
  known.Set("loss_weight", "3");
  known.Set("loss_weight_none", "1");
  known.Set("encoder", "bilstm");
  known.Set("encoder_vectors", "");
  return known;
}

// Flags override the file, the file overrides the environment.
ConfigMap ResolveSettings(const CommonOptions& o) {
  const ConfigMap known = KnownKeys();
  ConfigMap merged = ConfigMap::FromEnvironment(kEnvPrefix, known);
  if (!o.config_file.empty()) merged.Merge(ConfigMap::ReadFile(o.config_file));
  for (const std::string& kv : o.sets) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::kBadConfig, "--set expects key=value, got '" + kv + "'");
    }
    merged.Set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  for (const auto& [key, unused] : merged.values()) {
    if (!known.Has(key)) throw Error(ErrorCode::kBadConfig, "unknown setting '" + key + "'");
  }
  return merged;
}

EncoderSpec EncoderFrom(const ConfigMap& c) {
  EncoderSpec e;
  e.kind = c.GetString("encoder", e.kind);
  e.vectors = c.GetString("encoder_vectors", "");
  return e;
}

json RunHeader(const std::string& command, const ConfigMap& settings,
               const json& paths, const json& extra = json::object()) {
  json h = {{"command", command},
            {"version", kArtifactVersion},
            {"settings", settings.ToJson()},
            {"paths", paths}};
  for (auto it = extra.begin(); it != extra.end(); ++it) h[it.key()] = it.value();
  return h;
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

std::string ReadText(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// A single file is used as is; a directory holds train/valid/test files.
std::vector<Dialogue> LoadSplit(const std::string& path, Split split) {
  return LoadDataset(path, split);
}

json QuadToJson(const std::string& id, const Quadruple& q) {
  return {{"dialogue_id", id},
          {"target", SpanToJson(q.target)},
          {"aspect", SpanToJson(q.aspect)},
          {"opinion", SpanToJson(q.opinion)},
          {"polarity", PolarityName(q.polarity)}};
}

std::string PredictionsToJsonl(const std::vector<DialogueQuads>& preds,
                               const json& run_header) {
  json ids = json::array();
  for (const DialogueQuads& p : preds) ids.push_back(p.id);
  std::string out = json{{"format", "diaquad-predictions"},
                         {"version", kArtifactVersion},
                         {"run_config", run_header},
                         {"dialogue_ids", ids}}
                        .dump() +
                    "\n";
  for (const DialogueQuads& p : preds) {
    for (const Quadruple& q : p.quads) out += QuadToJson(p.id, q).dump() + "\n";
  }
  return out;
}

// Reads a predictions file: JSON lines with an optional header naming every
// dialogue, or a corpus file whose gold quads serve as predictions. Without
// a header, gold dialogues absent from the file count as empty predictions.
std::vector<DialogueQuads> ReadPredictions(const fs::path& path,
                                           const std::vector<Dialogue>& gold) {
  const std::string text = ReadText(path);
  {
    json whole = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (whole.is_object() && whole.contains("dialogues")) {
      return GoldQuads(ParseDataset(whole));
    }
  }
  std::vector<std::string> order;
  std::map<std::string, std::vector<Quadruple>> by_id;
  bool have_header = false;
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedFile, where + ": " + e.what());
    }
    if (j.contains("format")) {
      if (j.at("format") != "diaquad-predictions") {
        throw Error(ErrorCode::kMalformedFile, where + ": not a predictions file");
      }
      have_header = true;
      for (const json& id : j.value("dialogue_ids", json::array())) {
        const std::string s = id.get<std::string>();
        if (by_id.emplace(s, std::vector<Quadruple>()).second) order.push_back(s);
      }
      continue;
    }
    if (!j.is_object() || !j.contains("dialogue_id") || !j["dialogue_id"].is_string()) {
      throw Error(ErrorCode::kMalformedFile, where + ": missing dialogue_id");
    }
    Quadruple q;
    q.target = SpanFromJson(j.at("target"), where + ".target");
    q.aspect = SpanFromJson(j.at("aspect"), where + ".aspect");
    q.opinion = SpanFromJson(j.at("opinion"), where + ".opinion");
    q.polarity = ParsePolarity(j.at("polarity").get<std::string>());
    const std::string id = j["dialogue_id"];
    if (!by_id.count(id)) {
      if (have_header) {
        throw Error(ErrorCode::kIdMismatch, where + ": dialogue '" + id +
                                                "' is not listed in the header");
      }
      order.push_back(id);
    }
    by_id[id].push_back(q);
  }
  if (!have_header) {
    for (const Dialogue& d : gold) {
      if (by_id.emplace(d.id, std::vector<Quadruple>()).second) order.push_back(d.id);
    }
  }
  std::vector<DialogueQuads> out;
  for (const std::string& id : order) out.push_back({id, by_id[id]});
  return out;
}

void EmitJson(const json& j, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << j.dump(2) << "\n";
  } else {
    WriteText(out_path, j.dump(2) + "\n");
  }
}

int Synth(const CommonOptions& common, uint64_t seed, int n, const std::string& out_path,
          const std::string& profile_path, std::ostream& out) {
  const ConfigMap settings = ResolveSettings(common);
  SynthProfile profile;
  if (!profile_path.empty()) {
    try {
      profile = SynthProfile::FromJson(json::parse(ReadText(profile_path)));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kBadProfile, profile_path + ": " + e.what());
    }
  }
  if (n < 0) throw Error(ErrorCode::kBadProfile, "--n must be >= 0");
  const SynthResult r = SynthCorpus(seed, n, profile);
  const json header = RunHeader("synth", settings, {{"out", out_path}, {"profile", profile_path}},
                                {{"seed", seed}, {"n", n}, {"profile", profile.ToJson()}});
  WriteDataset(out_path, r.dialogues,
               {{"format", "diaquad-corpus"}, {"version", kArtifactVersion},
                {"run_config", header}});
  json manifest = r.manifest.ToJson();
  manifest["format"] = "diaquad-synth-manifest";
  manifest["version"] = kArtifactVersion;
  manifest["run_config"] = header;
  WriteText(out_path + ".manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << r.dialogues.size() << " dialogues to " << out_path << "\n";
  return 0;
}

int TrainCommand(const CommonOptions& common, const std::string& data,
                 const std::string& dev_path, const std::string& out_dir,
                 std::optional<int> epochs, std::ostream& out) {
  ConfigMap settings = ResolveSettings(common);
  if (epochs) settings.Set("epochs", std::to_string(*epochs));
  const ModelConfig model_config = ModelConfig::FromConfig(settings);
  TrainOptions options = TrainOptions::FromConfig(settings);
  options.out_dir = out_dir;
  const EncoderSpec encoder = EncoderFrom(settings);

  const std::vector<Dialogue> train = LoadSplit(data, Split::kTrain);
  std::vector<Dialogue> dev;
  if (!dev_path.empty()) {
    dev = LoadSplit(dev_path, Split::kValid);
  } else if (fs::is_directory(data) &&
             fs::exists(fs::path(data) / (std::string(SplitName(Split::kValid)) + ".json"))) {
    dev = LoadDataset(data, Split::kValid);
  }
  const ModelVocab vocab = ModelVocab::Build(train);
  auto model = MakeModel(model_config, vocab, encoder);
  const json header = RunHeader(
      "train", settings, {{"data", data}, {"dev", dev_path}, {"out", out_dir}},
      {{"model_config", model_config.ToConfig().ToJson()},
       {"train_options", options.ToConfig().ToJson()},
       {"encoder", encoder.ToJson()},
       {"seed", model_config.seed}});
  const TrainResult r = Train(*model, train, dev, options, header,
                              [&](const EpochLog& e) { out << e.ToJson().dump() << "\n"; },
                              encoder);
  SaveModel(fs::path(out_dir) / "last.ckpt.json", *model, encoder,
            {{"epoch", options.epochs}, {"run_config", header}});
  out << json{{"best_epoch", r.best_epoch},
              {"best_dev_micro_f1", r.best_dev_micro_f1},
              {"checkpoint", (fs::path(out_dir) / "best.ckpt.json").string()}}
             .dump()
      << "\n";
  return 0;
}

int PredictCommand(const CommonOptions& common, const std::string& checkpoint,
                   const std::string& data, const std::string& out_path,
                   std::ostream& out) {
  const ConfigMap settings = ResolveSettings(common);
  auto model = LoadModel(checkpoint);
  const std::vector<Dialogue> dialogues = LoadSplit(data, Split::kTest);
  const json header = RunHeader(
      "predict", settings, {{"checkpoint", checkpoint}, {"data", data}, {"out", out_path}});
  const std::string text = PredictionsToJsonl(Predict(*model, dialogues), header);
  if (out_path.empty()) {
    out << text;
  } else {
    WriteText(out_path, text);
  }
  return 0;
}

int EvalCommand(const CommonOptions& common, const std::string& gold_path,
                const std::string& pred_path, const std::string& checkpoint,
                const std::string& out_path, bool verbose, std::ostream& out) {
  const ConfigMap settings = ResolveSettings(common);
  const std::vector<Dialogue> gold = LoadSplit(gold_path, Split::kTest);
  std::vector<DialogueQuads> preds;
  if (!checkpoint.empty()) {
    preds = Predict(*LoadModel(checkpoint), gold);
  } else {
    preds = ReadPredictions(pred_path, gold);
  }
  const EvalReport report = Evaluate(preds, GoldQuads(gold));
  json j = report.ToJson(verbose);
  j["format"] = "diaquad-eval-report";
  j["version"] = kArtifactVersion;
  j["run_config"] = RunHeader(
      "eval", settings,
      {{"gold", gold_path}, {"pred", pred_path}, {"checkpoint", checkpoint}, {"out", out_path}});
  EmitJson(j, out_path, out);
  return 0;
}

int InspectGraphs(const CommonOptions& common, const std::string& data,
                  const std::vector<std::string>& ids, const std::string& out_path,
                  std::ostream& out) {
  const ConfigMap settings = ResolveSettings(common);
  const ModelConfig mc = ModelConfig::FromConfig(settings);
  const std::vector<Dialogue> dialogues = LoadSplit(data, Split::kTest);
  const std::set<std::string> wanted(ids.begin(), ids.end());
  json dumped = json::array();
  for (const Dialogue& d : dialogues) {
    if (!wanted.empty() && !wanted.count(d.id)) continue;
    dumped.push_back(GraphsToJson(d, mc.structure_mode));
  }
  if (dumped.size() < wanted.size()) {
    throw Error(ErrorCode::kIdMismatch, "some requested dialogue ids are not in " + data);
  }
  EmitJson({{"format", "diaquad-graphs"},
            {"version", kArtifactVersion},
            {"run_config", RunHeader("inspect-graphs", settings,
                                     {{"data", data}, {"out", out_path}})},
            {"dialogues", dumped}},
           out_path, out);
  return 0;
}

int GradCheckCommand(const CommonOptions& common, uint64_t seed, int dim,
                     const std::string& data, double tolerance,
                     const std::string& out_path, std::ostream& out, std::ostream& err) {
  const ConfigMap settings = ResolveSettings(common);
  Dialogue d;
  if (data.empty()) {
    d = GradCheckDialogue(seed);
  } else {
    const std::vector<Dialogue> all = LoadSplit(data, Split::kTrain);
    if (all.empty()) throw Error(ErrorCode::kMalformedFile, data + " holds no dialogues");
    d = all.front();
  }
  ConfigMap resolved = GradCheckModelConfig(dim).ToConfig();
  resolved.Set("seed", std::to_string(seed));
  resolved.Merge(settings);
  resolved.Set("dropout", "0");
  const ModelConfig mc = ModelConfig::FromConfig(resolved);
  auto model = MakeModel(mc, ModelVocab::Build({d}), EncoderFrom(settings));
  ad::GradCheckOptions options;
  options.tolerance = tolerance;
  const ad::GradCheckReport report = CheckModelGradients(*model, d, options);
  json j = report.ToJson();
  j["format"] = "diaquad-gradcheck";
  j["version"] = kArtifactVersion;
  j["dialogue_id"] = d.id;
  j["parameters"] = model->params().NumScalars();
  j["run_config"] = RunHeader("gradcheck", settings, {{"data", data}, {"out", out_path}},
                              {{"model_config", mc.ToConfig().ToJson()}, {"seed", seed}});
  EmitJson(j, out_path, out);
  if (!report.passed) {
    err << "gradcheck: max relative error " << report.max_rel_error << " exceeds "
        << report.tolerance << "\n";
    return 3;
  }
  return 0;
}

void AddCommon(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config_file, "key = value settings file")
      ->check(CLI::ExistingFile);
  app->add_option("--set", o.sets, "override one setting, key=value (repeatable)");
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dialogue sentiment quadruple extraction with triple graph networks"};
  app.name("diaquad");
  app.require_subcommand(1);

  CommonOptions common;
  std::function<int()> action;

  uint64_t seed = 7;
  int n = 10;
  int dim = 8;
  double tolerance = 1e-4;
  std::string out_path, profile_path, data, dev_path, checkpoint, gold_path, pred_path;
  std::vector<std::string> ids;
  std::optional<int> epochs;
  bool verbose = false;

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  AddCommon(synth, common);
  synth->add_option("--seed", seed, "generator seed")->capture_default_str();
  synth->add_option("--n", n, "number of dialogues")->capture_default_str();
  synth->add_option("--out", out_path, "corpus file to write")->required();
  synth->add_option("--profile", profile_path, "JSON generator profile")
      ->check(CLI::ExistingFile);
  synth->callback([&] {
    action = [&] { return Synth(common, seed, n, out_path, profile_path, out); };
  });

  CLI::App* train = app.add_subcommand("train", "train a model");
  AddCommon(train, common);
  train->add_option("--data", data, "training corpus file or split directory")->required();
  train->add_option("--dev", dev_path, "dev corpus used for checkpoint selection");
  train->add_option("--out", out_path, "output directory")->required();
  train->add_option("--epochs", epochs, "override the epochs setting");
  train->callback([&] {
    action = [&] { return TrainCommand(common, data, dev_path, out_path, epochs, out); };
  });

  CLI::App* eval = app.add_subcommand("eval", "score predictions against gold quads");
  AddCommon(eval, common);
  eval->add_option("--gold", gold_path, "gold corpus")->required();
  auto* pred_opt = eval->add_option("--pred", pred_path, "predictions (JSON lines or corpus)");
  auto* ckpt_opt = eval->add_option("--checkpoint", checkpoint, "predict with this checkpoint");
  pred_opt->excludes(ckpt_opt);
  eval->add_option("--out", out_path, "report file (default: stdout)");
  eval->add_flag("--verbose", verbose, "report both locality restrictions");
  eval->callback([&] {
    if (pred_path.empty() && checkpoint.empty()) {
      throw CLI::ValidationError("eval", "one of --pred or --checkpoint is required");
    }
    action = [&] {
      return EvalCommand(common, gold_path, pred_path, checkpoint, out_path, verbose, out);
    };
  });

  CLI::App* predict = app.add_subcommand("predict", "decode quadruples with a checkpoint");
  AddCommon(predict, common);
  predict->add_option("--checkpoint", checkpoint, "checkpoint file")->required();
  predict->add_option("--data", data, "corpus to predict")->required();
  predict->add_option("--out", out_path, "JSON lines output (default: stdout)");
  predict->callback([&] {
    action = [&] { return PredictCommand(common, checkpoint, data, out_path, out); };
  });

  CLI::App* graphs = app.add_subcommand("inspect-graphs", "dump relation matrices");
  AddCommon(graphs, common);
  graphs->add_option("--data", data, "corpus file")->required();
  graphs->add_option("--id", ids, "restrict to these dialogue ids");
  graphs->add_option("--out", out_path, "output file (default: stdout)");
  graphs->callback([&] {
    action = [&] { return InspectGraphs(common, data, ids, out_path, out); };
  });

  CLI::App* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient check");
  AddCommon(gradcheck, common);
  gradcheck->add_option("--seed", seed, "dialogue and parameter seed")->capture_default_str();
  gradcheck->add_option("--dim", dim, "width of every layer")->capture_default_str();
  gradcheck->add_option("--data", data, "check on the first dialogue of this corpus");
  gradcheck->add_option("--tolerance", tolerance, "maximum relative error")
      ->capture_default_str();
  gradcheck->add_option("--out", out_path, "report file (default: stdout)");
  gradcheck->callback([&] {
    action = [&] {
      return GradCheckCommand(common, seed, dim, data, tolerance, out_path, out, err);
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    // Help requests exit 0; every other parse failure is a usage error.
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }
  if (!action) {
    err << "diaquad: no subcommand\n";
    return 1;
  }
  try {
    return action();
  } catch (const Error& e) {
    err << "diaquad: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const nlohmann::json::exception& e) {
    err << "diaquad: MALFORMED_FILE: " << e.what() << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "diaquad: IO: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "diaquad: internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace diaquad::cli
