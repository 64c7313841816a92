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

#ifndef DIAQUAD_CONFIG_H_
#define DIAQUAD_CONFIG_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "json.hpp"

namespace diaquad {

// Flat key/value configuration. Files hold one `key = value` per line;
// `#` starts a comment, blank lines are ignored and values may be quoted.
class ConfigMap {
 public:
  ConfigMap() = default;

  static ConfigMap ParseText(std::string_view text, const std::string& origin);
  static ConfigMap ReadFile(const std::filesystem::path& path);
  // Variables named <prefix><KEY> with KEY upper-cased and '.' as '_'.
  static ConfigMap FromEnvironment(std::string_view prefix,
                                   const ConfigMap& known_keys);

  void Set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool Has(const std::string& key) const { return values_.count(key) != 0; }
  // Keys that o defines replace ours.
  void Merge(const ConfigMap& o);

  std::string GetString(const std::string& key, const std::string& fallback) const;
  int GetInt(const std::string& key, int fallback) const;
  double GetDouble(const std::string& key, double fallback) const;
  bool GetBool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

  nlohmann::json ToJson() const;
  static ConfigMap FromJson(const nlohmann::json& j);
  std::string ToText() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace diaquad

#endif  // DIAQUAD_CONFIG_H_
