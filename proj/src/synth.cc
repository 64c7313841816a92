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

#include "diaquad/synth.h"

#include <algorithm>
#include <array>
#include <optional>
#include <random>
#include <string>

#include "diaquad/error.h"

namespace diaquad {

using nlohmann::json;

namespace {

constexpr int kMaxUtterancesBound = 16;
constexpr int kMaxTokensBound = 24;
constexpr int kPlacementAttempts = 24;

struct Word {
  const char* text;
  const char* pos;
};

constexpr std::array<Word, 10> kTargets = {{
    {"iphone", "NR"}, {"xiaomi", "NR"}, {"huawei", "NR"}, {"oppo", "NR"},
    {"vivo", "NR"},   {"pixel", "NR"},  {"galaxy", "NR"}, {"oneplus", "NR"},
    {"honor", "NR"},  {"meizu", "NR"},
}};
constexpr std::array<Word, 4> kTargetTails = {{
    {"pro", "JJ"}, {"max", "JJ"}, {"14", "CD"}, {"ultra", "JJ"},
}};
constexpr std::array<Word, 10> kAspects = {{
    {"screen", "NN"},  {"battery", "NN"}, {"camera", "NN"}, {"price", "NN"},
    {"signal", "NN"},  {"speaker", "NN"}, {"system", "NN"}, {"chip", "NN"},
    {"design", "NN"},  {"charging", "NN"},
}};
constexpr std::array<Word, 3> kAspectTails = {{
    {"life", "NN"}, {"quality", "NN"}, {"speed", "NN"},
}};
constexpr std::array<Word, 5> kPositive = {{
    {"great", "VA"}, {"smooth", "VA"}, {"excellent", "VA"}, {"amazing", "VA"},
    {"good", "VA"},
}};
constexpr std::array<Word, 5> kNegative = {{
    {"bad", "VA"}, {"laggy", "VA"}, {"poor", "VA"}, {"terrible", "VA"},
    {"awful", "VA"},
}};
constexpr std::array<Word, 3> kNeutral = {{
    {"okay", "VA"}, {"average", "VA"}, {"mediocre", "VA"},
}};
constexpr std::array<Word, 3> kOpinionHeads = {{
    {"quite", "AD"}, {"pretty", "AD"}, {"rather", "AD"},
}};
constexpr std::array<Word, 18> kFillers = {{
    {"i", "PN"},     {"think", "VV"}, {"the", "DT"},  {"is", "VC"},
    {"and", "CC"},   {"but", "CC"},   {"this", "DT"}, {"that", "DT"},
    {"my", "PN"},    {"it", "PN"},    {"so", "AD"},   {"also", "AD"},
    {"just", "AD"},  {"than", "P"},   {"with", "P"},  {"of", "DEG"},
    {",", "PU"},     {"bought", "VV"},
}};

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Inclusive bounds; modulo reduction keeps results identical across
  // standard library implementations.
  int Int(int lo, int hi) {
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }
  double Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool Bernoulli(double p) { return Unit() < p; }
  template <typename T, size_t N>
  const T& Pick(const std::array<T, N>& a) {
    return a[Int(0, static_cast<int>(N) - 1)];
  }

 private:
  std::mt19937_64 engine_;
};

enum class Role { kFree, kTarget, kAspect, kOpinion };

struct Slot {
  Role role = Role::kFree;
  bool head = false;
  Polarity polarity = Polarity::kOther;
};

struct Draft {
  std::vector<int> reply_to;
  std::vector<std::vector<Slot>> slots;
  std::vector<Quadruple> quads;
};

std::optional<Span> FindFree(const Draft& draft, int utterance, int length,
                             Rng& rng) {
  const std::vector<Slot>& row = draft.slots[utterance];
  const int n = static_cast<int>(row.size());
  std::vector<int> starts;
  for (int s = 0; s + length <= n; ++s) {
    bool free = true;
    for (int k = s; k < s + length; ++k) free = free && row[k].role == Role::kFree;
    if (free) starts.push_back(s);
  }
  if (starts.empty()) return std::nullopt;
  const int s = starts[rng.Int(0, static_cast<int>(starts.size()) - 1)];
  return Span{utterance, s, s + length - 1};
}

void Mark(Draft& draft, const Span& span, Role role, Polarity polarity) {
  for (int k = span.start; k <= span.end; ++k) {
    Slot& slot = draft.slots[span.utterance][k];
    slot.role = role;
    slot.head = (k == span.start);
    slot.polarity = polarity;
  }
}

// Ancestors of u (excluding u) along its reply chain.
std::vector<int> Ancestors(const Draft& draft, int u) {
  std::vector<int> out;
  for (int cur = draft.reply_to[u]; cur != kNone; cur = draft.reply_to[cur]) {
    out.push_back(cur);
  }
  return out;
}

// Reserves three disjoint spans for one quad; nothing is marked on failure.
bool PlantQuad(Draft& draft, Locality locality, bool share_target,
               const SynthProfile& profile, Rng& rng) {
  const int n = static_cast<int>(draft.slots.size());
  const Polarity polarity = static_cast<Polarity>(rng.Int(0, 2));
  auto len = [&] { return rng.Int(1, profile.max_span_length); };

  for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
    std::optional<Span> target;
    if (share_target && !draft.quads.empty()) {
      target = draft.quads[rng.Int(0, static_cast<int>(draft.quads.size()) - 1)]
                   .target;
    }
    int target_utt;
    int ao_utt;   // utterance receiving the aspect
    int op_utt;   // utterance receiving the opinion
    if (locality == Locality::kIntra) {
      target_utt = target ? target->utterance : rng.Int(0, n - 1);
      ao_utt = op_utt = target_utt;
    } else {
      if (n < 2) return false;
      if (target) {
        target_utt = target->utterance;
        std::vector<int> descendants;
        for (int c = target_utt + 1; c < n; ++c) {
          const std::vector<int> anc = Ancestors(draft, c);
          if (std::find(anc.begin(), anc.end(), target_utt) != anc.end()) {
            descendants.push_back(c);
          }
        }
        if (descendants.empty()) continue;
        ao_utt = op_utt =
            descendants[rng.Int(0, static_cast<int>(descendants.size()) - 1)];
      } else {
        const int child = rng.Int(1, n - 1);
        const std::vector<int> anc = Ancestors(draft, child);
        // Mostly the direct parent, sometimes further up the thread.
        const int up = rng.Bernoulli(0.75)
                           ? 0
                           : rng.Int(0, static_cast<int>(anc.size()) - 1);
        target_utt = anc[up];
        if (rng.Bernoulli(0.5)) {
          ao_utt = op_utt = child;
        } else {
          ao_utt = target_utt;
          op_utt = child;
        }
      }
    }

    Draft trial = draft;
    if (!target) {
      target = FindFree(trial, target_utt, len(), rng);
      if (!target) continue;
      Mark(trial, *target, Role::kTarget, polarity);
    }
    std::optional<Span> aspect = FindFree(trial, ao_utt, len(), rng);
    if (!aspect) continue;
    Mark(trial, *aspect, Role::kAspect, polarity);
    std::optional<Span> opinion = FindFree(trial, op_utt, len(), rng);
    if (!opinion) continue;
    Mark(trial, *opinion, Role::kOpinion, polarity);

    Quadruple q{*target, *aspect, *opinion, polarity};
    if (ClassifyLocality(q) != locality) continue;
    if (std::find(trial.quads.begin(), trial.quads.end(), q) !=
        trial.quads.end()) {
      continue;
    }
    trial.quads.push_back(q);
    draft = std::move(trial);
    return true;
  }
  return false;
}

// Random dependency tree: tokens attach to a random earlier node of a random
// permutation, whose first element is the root.
std::vector<int> RandomHeads(int n, Rng& rng) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.Int(0, i)]);
  std::vector<int> heads(n, kNone);
  for (int k = 1; k < n; ++k) heads[order[k]] = order[rng.Int(0, k - 1)];
  return heads;
}

Token MakeToken(const Slot& slot, Rng& rng) {
  Word w{};
  switch (slot.role) {
    case Role::kFree:
      w = rng.Pick(kFillers);
      break;
    case Role::kTarget:
      w = slot.head ? rng.Pick(kTargets) : rng.Pick(kTargetTails);
      break;
    case Role::kAspect:
      w = slot.head ? rng.Pick(kAspects) : rng.Pick(kAspectTails);
      break;
    case Role::kOpinion:
      // Multi-token opinions are "<degree adverb> <sentiment word>"; the
      // sentiment word carries the polarity either way.
      break;
  }
  Token t;
  t.text = w.text ? w.text : "";
  t.pos = w.pos ? w.pos : "";
  return t;
}

Dialogue Realize(const Draft& draft, const std::string& id,
                 const SynthProfile& profile, Rng& rng) {
  Dialogue d;
  d.id = id;
  const int n = static_cast<int>(draft.slots.size());
  for (int i = 0; i < n; ++i) {
    Utterance u;
    u.index = i;
    u.reply_to = draft.reply_to[i];
    const int spk = i == 0 ? 0 : rng.Int(0, profile.num_speakers - 1);
    u.speaker = "speaker_" + std::to_string(spk);
    const std::vector<Slot>& row = draft.slots[i];
    for (size_t k = 0; k < row.size(); ++k) {
      const Slot& slot = row[k];
      Token t;
      if (slot.role == Role::kOpinion) {
        const bool last = k + 1 == row.size() || row[k + 1].role != Role::kOpinion ||
                          row[k + 1].head;
        Word w{};
        if (!last) {
          w = rng.Pick(kOpinionHeads);
        } else if (slot.polarity == Polarity::kPos) {
          w = rng.Pick(kPositive);
        } else if (slot.polarity == Polarity::kNeg) {
          w = rng.Pick(kNegative);
        } else {
          w = rng.Pick(kNeutral);
        }
        t.text = w.text;
        t.pos = w.pos;
      } else {
        t = MakeToken(slot, rng);
      }
      u.tokens.push_back(std::move(t));
    }
    const std::vector<int> heads = RandomHeads(static_cast<int>(row.size()), rng);
    for (size_t k = 0; k < row.size(); ++k) u.tokens[k].dep_head = heads[k];
    d.utterances.push_back(std::move(u));
  }
  // Speaker ids are dense by first appearance, as the loader assigns them.
  Vocabulary speakers;
  for (Utterance& u : d.utterances) u.speaker_id = speakers.Intern(u.speaker);
  d.gold_quads = draft.quads;
  return d;
}

}  // namespace

json SynthProfile::ToJson() const {
  return {{"min_utterances", min_utterances},
          {"max_utterances", max_utterances},
          {"min_tokens", min_tokens},
          {"max_tokens", max_tokens},
          {"num_speakers", num_speakers},
          {"min_quads", min_quads},
          {"max_quads", max_quads},
          {"max_span_length", max_span_length},
          {"intra_ratio", intra_ratio},
          {"shared_target_prob", shared_target_prob}};
}

SynthProfile SynthProfile::FromJson(const json& j) {
  SynthProfile p;
  p.min_utterances = j.value("min_utterances", p.min_utterances);
  p.max_utterances = j.value("max_utterances", p.max_utterances);
  p.min_tokens = j.value("min_tokens", p.min_tokens);
  p.max_tokens = j.value("max_tokens", p.max_tokens);
  p.num_speakers = j.value("num_speakers", p.num_speakers);
  p.min_quads = j.value("min_quads", p.min_quads);
  p.max_quads = j.value("max_quads", p.max_quads);
  p.max_span_length = j.value("max_span_length", p.max_span_length);
  p.intra_ratio = j.value("intra_ratio", p.intra_ratio);
  p.shared_target_prob = j.value("shared_target_prob", p.shared_target_prob);
  return p;
}

void CheckProfile(const SynthProfile& p) {
  auto bad = [](const std::string& what) {
    throw Error(ErrorCode::kBadProfile, what);
  };
  if (p.min_utterances < 1 || p.max_utterances < p.min_utterances ||
      p.max_utterances > kMaxUtterancesBound) {
    bad("utterance bounds must satisfy 1 <= min <= max <= 16");
  }
  if (p.min_tokens < 1 || p.max_tokens < p.min_tokens ||
      p.max_tokens > kMaxTokensBound) {
    bad("token bounds must satisfy 1 <= min <= max <= 24");
  }
  if (p.num_speakers < 1) bad("num_speakers must be >= 1");
  if (p.min_quads < 0 || p.max_quads < p.min_quads) {
    bad("quad bounds must satisfy 0 <= min <= max");
  }
  if (p.max_span_length < 1) bad("max_span_length must be >= 1");
  if (!(p.intra_ratio >= 0.0 && p.intra_ratio <= 1.0)) {
    bad("intra_ratio must lie in [0, 1]");
  }
  if (!(p.shared_target_prob >= 0.0 && p.shared_target_prob <= 1.0)) {
    bad("shared_target_prob must lie in [0, 1]");
  }
  if (p.intra_ratio < 1.0 && p.max_quads > 0 && p.max_utterances < 2) {
    bad("inter-utterance quads need max_utterances >= 2");
  }
}

json StatsToJson(const CorpusStats& s) {
  return {{"dialogues", s.dialogues}, {"utterances", s.utterances},
          {"speakers", s.speakers},   {"quads", s.quads},
          {"intra", s.intra},         {"inter", s.inter},
          {"tokens", s.tokens}};
}

json SynthManifest::ToJson() const {
  return {{"seed", seed},
          {"requested", requested},
          {"profile", profile.ToJson()},
          {"stats", StatsToJson(stats)}};
}

SynthResult SynthCorpus(uint64_t seed, int n_dialogues,
                        const SynthProfile& profile) {
  CheckProfile(profile);
  if (n_dialogues < 0) {
    throw Error(ErrorCode::kBadProfile, "dialogue count must be >= 0");
  }
  Rng rng(seed);
  SynthResult result;
  for (int k = 0; k < n_dialogues; ++k) {
    const int n_quads = rng.Int(profile.min_quads, profile.max_quads);
    std::vector<Locality> localities;
    bool any_inter = false;
    for (int q = 0; q < n_quads; ++q) {
      const Locality l = rng.Bernoulli(profile.intra_ratio) ? Locality::kIntra
                                                            : Locality::kInter;
      any_inter = any_inter || l == Locality::kInter;
      localities.push_back(l);
    }
    int n_utt = rng.Int(profile.min_utterances, profile.max_utterances);
    if (any_inter) n_utt = std::max(n_utt, 2);

    Draft draft;
    draft.reply_to.assign(n_utt, kNone);
    draft.slots.resize(n_utt);
    for (int i = 0; i < n_utt; ++i) {
      if (i > 0) {
        draft.reply_to[i] = rng.Bernoulli(0.5) ? i - 1 : rng.Int(0, i - 1);
      }
      draft.slots[i].resize(rng.Int(profile.min_tokens, profile.max_tokens));
    }
    for (const Locality l : localities) {
      const bool share = rng.Bernoulli(profile.shared_target_prob);
      if (!PlantQuad(draft, l, share, profile, rng) && share) {
        PlantQuad(draft, l, false, profile, rng);
      }
    }
    Dialogue d = Realize(draft, "synth-" + std::to_string(seed) + "-" +
                                    std::to_string(k),
                         profile, rng);
    const std::vector<Violation> report = ValidateDialogue(d);
    if (!report.empty()) {
      throw Error(ErrorCode::kInvariant,
                  "generator produced an invalid dialogue: " +
                      report.front().message);
    }
    result.dialogues.push_back(std::move(d));
  }
  result.manifest.seed = seed;
  result.manifest.requested = n_dialogues;
  result.manifest.profile = profile;
  result.manifest.stats = ComputeStats(result.dialogues);
  return result;
}

}  // namespace diaquad
