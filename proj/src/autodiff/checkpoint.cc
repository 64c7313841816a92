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

#include "diaquad/autodiff/checkpoint.h"

#include <fstream>

#include "diaquad/error.h"

namespace diaquad::ad {

using nlohmann::json;

json CheckpointToJson(const ParamStore& store, const Adam* adam,
                      const json& metadata) {
  json params = json::array();
  for (const Parameter& p : store.params()) {
    params.push_back({{"name", p.name},
                      {"shape", p.value.shape()},
                      {"group", p.group == ParamGroup::kEncoder ? "encoder" : "other"},
                      {"values", std::vector<double>(p.value.values().begin(),
                                                     p.value.values().end())}});
  }
  json out = {{"format", "diaquad-checkpoint"},
              {"version", kCheckpointVersion},
              {"metadata", metadata},
              {"params", params}};
  out["optimizer"] = adam ? adam->ToJson(store) : json(nullptr);
  return out;
}

void SaveCheckpoint(const std::filesystem::path& path, const ParamStore& store,
                    const Adam* adam, const json& metadata) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write checkpoint " + path.string());
  out << CheckpointToJson(store, adam, metadata).dump() << "\n";
}

json ReadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open checkpoint " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": " + e.what());
  }
  if (j.value("format", "") != "diaquad-checkpoint") {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": not a checkpoint");
  }
  if (j.value("version", 0) != kCheckpointVersion) {
    throw Error(ErrorCode::kMalformedFile,
                path.string() + ": unsupported checkpoint version");
  }
  return j;
}

void RestoreParams(const json& checkpoint, ParamStore& store) {
  const json& params = checkpoint.at("params");
  if (params.size() != store.params().size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "checkpoint has " + std::to_string(params.size()) +
                    " parameters, model expects " +
                    std::to_string(store.params().size()));
  }
  for (const json& jp : params) {
    const std::string name = jp.at("name").get<std::string>();
    const Parameter* p = store.Find(name);
    if (!p) throw Error(ErrorCode::kShapeMismatch, "unknown parameter " + name);
    const Shape shape = jp.at("shape").get<Shape>();
    if (shape != p->value.shape()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "parameter " + name + ": checkpoint shape " +
                      ShapeString(shape) + " vs model " +
                      ShapeString(p->value.shape()));
    }
    const auto values = jp.at("values").get<std::vector<double>>();
    if (static_cast<int>(values.size()) != p->value.size()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "parameter " + name + ": wrong value count");
    }
    Tensor t = p->value;
    std::copy(values.begin(), values.end(), t.mutable_values().begin());
  }
}

}  // namespace diaquad::ad
