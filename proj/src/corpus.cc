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

#include "diaquad/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "diaquad/error.h"

namespace diaquad {

using nlohmann::json;

std::string_view PolarityName(Polarity p) {
  switch (p) {
    case Polarity::kPos: return "pos";
    case Polarity::kNeg: return "neg";
    case Polarity::kOther: return "other";
  }
  return "other";
}

Polarity ParsePolarity(std::string_view name) {
  if (name == "pos") return Polarity::kPos;
  if (name == "neg") return Polarity::kNeg;
  if (name == "other") return Polarity::kOther;
  throw Error(ErrorCode::kMalformedFile,
              "unknown polarity '" + std::string(name) + "'");
}

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest: return "test";
  }
  return "train";
}

std::string_view LocalityName(Locality locality) {
  return locality == Locality::kIntra ? "intra" : "inter";
}

GlobalTokenMap::GlobalTokenMap(const Dialogue& d) {
  offsets_.reserve(d.utterances.size() + 1);
  offsets_.push_back(0);
  for (const Utterance& u : d.utterances) {
    for (int k = 0; k < u.size(); ++k) {
      owner_.push_back(static_cast<int>(offsets_.size()) - 1);
    }
    total_ += u.size();
    offsets_.push_back(total_);
  }
}

int GlobalTokenMap::ToGlobal(int utterance, int offset) const {
  if (utterance < 0 || utterance >= num_utterances() || offset < 0 ||
      offset >= utterance_size(utterance)) {
    throw Error(ErrorCode::kInvariant,
                "token (" + std::to_string(utterance) + "," +
                    std::to_string(offset) + ") outside dialogue");
  }
  return offsets_[utterance] + offset;
}

std::pair<int, int> GlobalTokenMap::ToLocal(int global) const {
  if (global < 0 || global >= total_) {
    throw Error(ErrorCode::kInvariant,
                "global token " + std::to_string(global) + " out of range");
  }
  const int u = owner_[global];
  return {u, global - offsets_[u]};
}

namespace {

std::string SpanText(const Span& s) {
  std::ostringstream os;
  os << "[" << s.utterance << "," << s.start << "," << s.end << "]";
  return os.str();
}

bool SpanResolves(const Dialogue& d, const Span& s) {
  return s.utterance >= 0 && s.utterance < d.size() && s.start >= 0 &&
         s.start <= s.end && s.end < d.utterances[s.utterance].size();
}

}  // namespace

std::vector<Violation> ValidateDialogue(const Dialogue& d) {
  std::vector<Violation> out;
  auto add = [&out](ViolationKind kind, std::string msg) {
    out.push_back({kind, std::move(msg)});
  };
  const int n = d.size();
  if (n == 0) {
    add(ViolationKind::kStructure, "dialogue has no utterances");
    return out;
  }

  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const Utterance& u = d.utterances[i];
    const std::string where = "utterance " + std::to_string(i);
    if (u.index != i) {
      add(ViolationKind::kStructure,
          where + ": index field " + std::to_string(u.index) +
              " does not match position");
    }
    if (u.reply_to == kNone) {
      ++roots;
      if (i != 0) {
        add(ViolationKind::kTree, where + ": only utterance 0 may be the root");
      }
    } else if (u.reply_to < 0 || u.reply_to >= i) {
      add(ViolationKind::kTree,
          where + ": reply_to " + std::to_string(u.reply_to) +
              " violates replies point strictly backward");
    }

    const int nt = u.size();
    if (nt == 0) {
      add(ViolationKind::kToken, where + ": no tokens");
      continue;
    }
    int token_roots = 0;
    bool heads_ok = true;
    for (int k = 0; k < nt; ++k) {
      const int h = u.tokens[k].dep_head;
      if (h == kNone) {
        ++token_roots;
      } else if (h == k) {
        heads_ok = false;
        add(ViolationKind::kToken,
            where + ": token " + std::to_string(k) + " heads itself");
      } else if (h < 0 || h >= nt) {
        heads_ok = false;
        add(ViolationKind::kToken, where + ": token " + std::to_string(k) +
                                       " head " + std::to_string(h) +
                                       " out of range");
      }
    }
    if (token_roots != 1) {
      heads_ok = false;
      add(ViolationKind::kToken,
          where + ": expected exactly one syntactic root, found " +
              std::to_string(token_roots));
    }
    if (heads_ok) {
      // Every token must reach the root within nt hops.
      for (int k = 0; k < nt; ++k) {
        int cur = k;
        int hops = 0;
        while (u.tokens[cur].dep_head != kNone && hops <= nt) {
          cur = u.tokens[cur].dep_head;
          ++hops;
        }
        if (hops > nt) {
          add(ViolationKind::kToken, where + ": dependency heads form a cycle");
          break;
        }
      }
    }
  }
  if (roots != 1) {
    add(ViolationKind::kTree, "expected a single root utterance, found " +
                                  std::to_string(roots) +
                                  " (violates single root)");
  }

  std::set<Quadruple> seen;
  for (size_t q = 0; q < d.gold_quads.size(); ++q) {
    const Quadruple& quad = d.gold_quads[q];
    const std::string where = "quad " + std::to_string(q);
    for (const auto& [name, span] :
         {std::pair<const char*, const Span*>{"target", &quad.target},
          {"aspect", &quad.aspect},
          {"opinion", &quad.opinion}}) {
      if (!SpanResolves(d, *span)) {
        add(ViolationKind::kSpan, where + ": " + name + " span " +
                                      SpanText(*span) +
                                      " does not resolve in the dialogue");
      }
    }
    if (!seen.insert(quad).second) {
      add(ViolationKind::kDuplicate, where + ": duplicate gold quadruple");
    }
  }
  return out;
}

std::vector<Thread> ExtractThreads(const Dialogue& d) {
  const int n = d.size();
  std::vector<bool> has_child(n, false);
  for (const Utterance& u : d.utterances) {
    if (u.reply_to != kNone) has_child[u.reply_to] = true;
  }
  std::vector<Thread> threads;
  for (int leaf = 0; leaf < n; ++leaf) {
    if (has_child[leaf]) continue;
    Thread t;
    for (int cur = leaf; cur != kNone; cur = d.utterances[cur].reply_to) {
      t.members.push_back(cur);
    }
    std::reverse(t.members.begin(), t.members.end());
    threads.push_back(std::move(t));
  }
  return threads;
}

Locality ClassifyLocality(const Quadruple& q) {
  return (q.target.utterance == q.aspect.utterance &&
          q.aspect.utterance == q.opinion.utterance)
             ? Locality::kIntra
             : Locality::kInter;
}

Vocabulary::Vocabulary(std::vector<std::string> reserved) {
  for (const std::string& s : reserved) Intern(s);
}

int Vocabulary::Intern(std::string_view s) {
  auto it = ids_.find(std::string(s));
  if (it != ids_.end()) return it->second;
  const int id = size();
  names_.emplace_back(s);
  ids_.emplace(names_.back(), id);
  return id;
}

int Vocabulary::Lookup(std::string_view s) const {
  auto it = ids_.find(std::string(s));
  return it == ids_.end() ? 0 : it->second;
}

bool Vocabulary::Contains(std::string_view s) const {
  return ids_.count(std::string(s)) != 0;
}

json Vocabulary::ToJson() const { return json(names_); }

Vocabulary Vocabulary::FromJson(const json& j) {
  Vocabulary v;
  for (const auto& s : j) v.Intern(s.get<std::string>());
  return v;
}

json SpanToJson(const Span& s) {
  return json::array({s.utterance, s.start, s.end});
}

namespace {

[[noreturn]] void Malformed(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kMalformedFile, where + ": " + what);
}

const json& Field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) Malformed(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) Malformed(where, std::string("missing field '") + key + "'");
  return *it;
}

int AsInt(const json& j, const std::string& where) {
  if (!j.is_number_integer()) Malformed(where, "expected an integer");
  return j.get<int>();
}

}  // namespace

Span SpanFromJson(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) {
    Malformed(where, "span must be [utterance, start, end]");
  }
  return Span{AsInt(j[0], where), AsInt(j[1], where), AsInt(j[2], where)};
}

json DialogueToJson(const Dialogue& d) {
  json utts = json::array();
  for (const Utterance& u : d.utterances) {
    json tokens = json::array();
    json pos = json::array();
    json heads = json::array();
    for (const Token& t : u.tokens) {
      tokens.push_back(t.text);
      pos.push_back(t.pos);
      heads.push_back(t.dep_head);
    }
    json ju = {{"speaker", u.speaker},
               {"reply_to", nullptr},
               {"tokens", tokens},
               {"pos", pos},
               {"dep_head", heads}};
    if (u.reply_to != kNone) ju["reply_to"] = u.reply_to;
    utts.push_back(std::move(ju));
  }
  json quads = json::array();
  for (const Quadruple& q : d.gold_quads) {
    quads.push_back({{"target", SpanToJson(q.target)},
                     {"aspect", SpanToJson(q.aspect)},
                     {"opinion", SpanToJson(q.opinion)},
                     {"polarity", PolarityName(q.polarity)}});
  }
  return {{"id", d.id}, {"utterances", utts}, {"quads", quads}};
}

Dialogue DialogueFromJson(const json& j, const std::string& where) {
  Dialogue d;
  const json& id = Field(j, "id", where);
  if (!id.is_string()) Malformed(where + ".id", "expected a string");
  d.id = id.get<std::string>();

  const json& utts = Field(j, "utterances", where);
  if (!utts.is_array()) Malformed(where + ".utterances", "expected an array");
  Vocabulary speakers;
  for (size_t i = 0; i < utts.size(); ++i) {
    const std::string uw = where + ".utterances[" + std::to_string(i) + "]";
    const json& ju = utts[i];
    Utterance u;
    u.index = static_cast<int>(i);
    const json& spk = Field(ju, "speaker", uw);
    if (spk.is_string()) {
      u.speaker = spk.get<std::string>();
    } else if (spk.is_number_integer()) {
      u.speaker = std::to_string(spk.get<long long>());
    } else {
      Malformed(uw + ".speaker", "expected a string or integer");
    }
    u.speaker_id = speakers.Intern(u.speaker);
    const json& reply = Field(ju, "reply_to", uw);
    u.reply_to = reply.is_null() ? kNone : AsInt(reply, uw + ".reply_to");

    const json& tokens = Field(ju, "tokens", uw);
    const json& pos = Field(ju, "pos", uw);
    const json& heads = Field(ju, "dep_head", uw);
    if (!tokens.is_array() || !pos.is_array() || !heads.is_array()) {
      Malformed(uw, "tokens, pos and dep_head must be arrays");
    }
    if (pos.size() != tokens.size() || heads.size() != tokens.size()) {
      Malformed(uw, "tokens, pos and dep_head lengths differ");
    }
    for (size_t k = 0; k < tokens.size(); ++k) {
      const std::string tw = uw + ".tokens[" + std::to_string(k) + "]";
      if (!tokens[k].is_string() || !pos[k].is_string()) {
        Malformed(tw, "token text and pos must be strings");
      }
      Token t;
      t.text = tokens[k].get<std::string>();
      t.pos = pos[k].get<std::string>();
      t.dep_head = AsInt(heads[k], uw + ".dep_head[" + std::to_string(k) + "]");
      if (t.dep_head < 0) t.dep_head = kNone;
      u.tokens.push_back(std::move(t));
    }
    d.utterances.push_back(std::move(u));
  }

  const json& quads = Field(j, "quads", where);
  if (!quads.is_array()) Malformed(where + ".quads", "expected an array");
  for (size_t q = 0; q < quads.size(); ++q) {
    const std::string qw = where + ".quads[" + std::to_string(q) + "]";
    Quadruple quad;
    quad.target = SpanFromJson(Field(quads[q], "target", qw), qw + ".target");
    quad.aspect = SpanFromJson(Field(quads[q], "aspect", qw), qw + ".aspect");
    quad.opinion =
        SpanFromJson(Field(quads[q], "opinion", qw), qw + ".opinion");
    const json& pol = Field(quads[q], "polarity", qw);
    if (!pol.is_string()) Malformed(qw + ".polarity", "expected a string");
    try {
      quad.polarity = ParsePolarity(pol.get<std::string>());
    } catch (const Error& e) {
      Malformed(qw + ".polarity", e.what());
    }
    d.gold_quads.push_back(quad);
  }
  return d;
}

std::vector<Dialogue> ParseDataset(const json& root) {
  const json& list = Field(root, "dialogues", "$");
  if (!list.is_array()) Malformed("$.dialogues", "expected an array");
  std::vector<Dialogue> out;
  out.reserve(list.size());
  for (size_t i = 0; i < list.size(); ++i) {
    const std::string where = "$.dialogues[" + std::to_string(i) + "]";
    Dialogue d = DialogueFromJson(list[i], where);
    const std::vector<Violation> report = ValidateDialogue(d);
    for (const Violation& v : report) {
      const std::string msg = where + " (" + d.id + "): " + v.message;
      switch (v.kind) {
        case ViolationKind::kSpan:
          throw Error(ErrorCode::kDanglingSpan, msg);
        case ViolationKind::kTree:
          throw Error(ErrorCode::kBrokenTree, msg);
        default:
          break;
      }
    }
    if (!report.empty()) {
      throw Error(ErrorCode::kMalformedFile,
                  where + " (" + d.id + "): " + report.front().message);
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<Dialogue> LoadDataset(const std::filesystem::path& path,
                                  Split split) {
  std::filesystem::path file = path;
  if (std::filesystem::is_directory(path)) {
    file = path / (std::string(SplitName(split)) + ".json");
  }
  std::ifstream in(file);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open corpus file " + file.string());
  }
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedFile, file.string() + ": " + e.what());
  }
  return ParseDataset(root);
}

void WriteDataset(const std::filesystem::path& path,
                  const std::vector<Dialogue>& dialogues,
                  const json& header) {
  json root = header.is_object() ? header : json::object();
  json list = json::array();
  for (const Dialogue& d : dialogues) list.push_back(DialogueToJson(d));
  root["dialogues"] = std::move(list);
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << root.dump(1) << "\n";
}

CorpusStats ComputeStats(const std::vector<Dialogue>& dialogues) {
  CorpusStats s;
  for (const Dialogue& d : dialogues) {
    ++s.dialogues;
    s.utterances += d.size();
    std::set<std::string> spk;
    for (const Utterance& u : d.utterances) {
      spk.insert(u.speaker);
      s.tokens += u.size();
    }
    s.speakers += static_cast<int>(spk.size());
    for (const Quadruple& q : d.gold_quads) {
      ++s.quads;
      if (ClassifyLocality(q) == Locality::kIntra) {
        ++s.intra;
      } else {
        ++s.inter;
      }
    }
  }
  return s;
}

}  // namespace diaquad
