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

#ifndef DIAQUAD_CORPUS_H_
#define DIAQUAD_CORPUS_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

namespace diaquad {

// Sentinel for "no reply target" and "no dependency head".
inline constexpr int kNone = -1;

struct Token {
  std::string text;
  std::string pos;
  int dep_head = kNone;  // offset into the same utterance, kNone for root
};

struct Utterance {
  int index = 0;
  std::string speaker;
  int speaker_id = 0;  // dense per dialogue, order of first appearance
  int reply_to = kNone;
  std::vector<Token> tokens;

  int size() const { return static_cast<int>(tokens.size()); }
};

// Token extent inside a single utterance; both ends inclusive.
struct Span {
  int utterance = 0;
  int start = 0;
  int end = 0;

  int length() const { return end - start + 1; }
  auto operator<=>(const Span&) const = default;
};

enum class Polarity { kPos, kNeg, kOther };

std::string_view PolarityName(Polarity p);
Polarity ParsePolarity(std::string_view name);  // throws kMalformedFile

struct Quadruple {
  Span target;
  Span aspect;
  Span opinion;
  Polarity polarity = Polarity::kOther;

  auto operator<=>(const Quadruple&) const = default;
};

struct Dialogue {
  std::string id;
  std::vector<Utterance> utterances;
  std::vector<Quadruple> gold_quads;

  int size() const { return static_cast<int>(utterances.size()); }
};

// Root-to-leaf path through the reply tree.
struct Thread {
  std::vector<int> members;

  bool operator==(const Thread&) const = default;
};

enum class Split { kTrain, kValid, kTest };

std::string_view SplitName(Split split);

enum class Locality { kIntra, kInter };

std::string_view LocalityName(Locality locality);

// Maps (utterance, offset) to a position in the dialogue-wide token sequence
// (utterance order, then token order) and back.
class GlobalTokenMap {
 public:
  explicit GlobalTokenMap(const Dialogue& d);

  int ToGlobal(int utterance, int offset) const;
  std::pair<int, int> ToLocal(int global) const;

  int size() const { return total_; }
  int utterance_offset(int utterance) const { return offsets_[utterance]; }
  int utterance_size(int utterance) const {
    return offsets_[utterance + 1] - offsets_[utterance];
  }
  int num_utterances() const {
    return static_cast<int>(offsets_.size()) - 1;
  }

 private:
  std::vector<int> offsets_;        // size N + 1
  std::vector<int> owner_;          // global -> utterance
  int total_ = 0;
};

enum class ViolationKind { kStructure, kTree, kToken, kSpan, kDuplicate };

struct Violation {
  ViolationKind kind;
  std::string message;
};

// Empty result means the dialogue satisfies every data-model invariant.
std::vector<Violation> ValidateDialogue(const Dialogue& d);

// One thread per leaf of the reply tree, ordered by leaf index.
std::vector<Thread> ExtractThreads(const Dialogue& d);

Locality ClassifyLocality(const Quadruple& q);

// Interned string table with dense ids. Id 0 is reserved for unknown
// strings when constructed with an unknown token.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> reserved);

  int Intern(std::string_view s);
  // Returns the id of s, or 0 when absent.
  int Lookup(std::string_view s) const;
  bool Contains(std::string_view s) const;
  const std::string& Name(int id) const { return names_.at(id); }
  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

  nlohmann::json ToJson() const;
  static Vocabulary FromJson(const nlohmann::json& j);

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> ids_;
};

// JSON (de)serialization of the corpus file schema.
nlohmann::json DialogueToJson(const Dialogue& d);
Dialogue DialogueFromJson(const nlohmann::json& j, const std::string& where);
nlohmann::json SpanToJson(const Span& s);
Span SpanFromJson(const nlohmann::json& j, const std::string& where);

std::vector<Dialogue> ParseDataset(const nlohmann::json& root);

// Loads and validates a corpus file. When path names a directory the file
// <path>/<split>.json is read, otherwise path itself.
std::vector<Dialogue> LoadDataset(const std::filesystem::path& path,
                                  Split split);

// Writes {"dialogues": [...]} plus any extra top-level keys in header.
void WriteDataset(const std::filesystem::path& path,
                  const std::vector<Dialogue>& dialogues,
                  const nlohmann::json& header = nlohmann::json::object());

struct CorpusStats {
  int dialogues = 0;
  int utterances = 0;
  int speakers = 0;  // summed per dialogue
  int quads = 0;
  int intra = 0;
  int inter = 0;
  int tokens = 0;
};

CorpusStats ComputeStats(const std::vector<Dialogue>& dialogues);

}  // namespace diaquad

#endif  // DIAQUAD_CORPUS_H_
