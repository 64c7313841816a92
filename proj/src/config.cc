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

#include "diaquad/config.h"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "diaquad/error.h"

namespace diaquad {

namespace {

std::string Trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] void BadValue(const std::string& key, const std::string& value,
                           const char* type) {
  throw Error(ErrorCode::kBadConfig,
              "key '" + key + "': '" + value + "' is not a valid " + type);
}

}  // namespace

ConfigMap ConfigMap::ParseText(std::string_view text, const std::string& origin) {
  ConfigMap out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = line;
    bool quoted = false;
    for (size_t i = 0; i < body.size(); ++i) {
      if (body[i] == '"') quoted = !quoted;
      if (body[i] == '#' && !quoted) {
        body.resize(i);
        break;
      }
    }
    body = Trim(body);
    if (body.empty()) continue;
    if (body.front() == '[') continue;  // section headers are ignored
    const size_t eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kBadConfig, origin + ":" + std::to_string(lineno) +
                                             ": expected key = value");
    }
    const std::string key = Trim(body.substr(0, eq));
    std::string value = Trim(body.substr(eq + 1));
    if (key.empty()) {
      throw Error(ErrorCode::kBadConfig,
                  origin + ":" + std::to_string(lineno) + ": empty key");
    }
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    out.values_[key] = value;
  }
  return out;
}

ConfigMap ConfigMap::ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseText(buf.str(), path.string());
}

ConfigMap ConfigMap::FromEnvironment(std::string_view prefix,
                                     const ConfigMap& known_keys) {
  ConfigMap out;
  for (const auto& [key, unused] : known_keys.values()) {
    std::string name(prefix);
    for (char c : key) {
      name.push_back(c == '.' ? '_' : static_cast<char>(std::toupper(
                                          static_cast<unsigned char>(c))));
    }
    if (const char* v = std::getenv(name.c_str())) out.values_[key] = v;
  }
  return out;
}

void ConfigMap::Merge(const ConfigMap& o) {
  for (const auto& [k, v] : o.values_) values_[k] = v;
}

std::string ConfigMap::GetString(const std::string& key,
                                 const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

int ConfigMap::GetInt(const std::string& key, int fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    size_t used = 0;
    const long long v = std::stoll(it->second, &used);
    if (used != it->second.size()) BadValue(key, it->second, "integer");
    return static_cast<int>(v);
  } catch (const std::logic_error&) {
    BadValue(key, it->second, "integer");
  }
}

double ConfigMap::GetDouble(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) BadValue(key, it->second, "number");
    return v;
  } catch (const std::logic_error&) {
    BadValue(key, it->second, "number");
  }
}

bool ConfigMap::GetBool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  BadValue(key, v, "boolean");
}

nlohmann::json ConfigMap::ToJson() const { return nlohmann::json(values_); }

ConfigMap ConfigMap::FromJson(const nlohmann::json& j) {
  ConfigMap out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    out.values_[it.key()] =
        it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
  }
  return out;
}

std::string ConfigMap::ToText() const {
  std::ostringstream os;
  for (const auto& [k, v] : values_) os << k << " = " << v << "\n";
  return os.str();
}

}  // namespace diaquad
