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

#include "diaquad/metrics.h"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "diaquad/error.h"

namespace diaquad {

namespace {

using Triple = std::tuple<Span, Span, Span>;

template <typename T>
int Overlap(const std::set<T>& a, const std::set<T>& b) {
  int n = 0;
  for (const T& x : a) n += b.count(x);
  return n;
}

MetricCounts Count(const std::set<Quadruple>& pred, const std::set<Quadruple>& gold) {
  return MetricCounts{static_cast<int>(gold.size()), static_cast<int>(pred.size()),
                      Overlap(pred, gold)};
}

std::set<Quadruple> WithLocality(const std::set<Quadruple>& quads, Locality l) {
  std::set<Quadruple> out;
  for (const Quadruple& q : quads) {
    if (ClassifyLocality(q) == l) out.insert(q);
  }
  return out;
}

std::set<Triple> Triples(const std::set<Quadruple>& quads) {
  std::set<Triple> out;
  for (const Quadruple& q : quads) out.emplace(q.target, q.aspect, q.opinion);
  return out;
}

std::map<std::string, std::set<Quadruple>> Index(const std::vector<DialogueQuads>& v,
                                                 const char* side) {
  std::map<std::string, std::set<Quadruple>> out;
  for (const DialogueQuads& d : v) {
    auto [it, fresh] = out.emplace(d.id, std::set<Quadruple>());
    if (!fresh) throw Error(ErrorCode::kIdMismatch, std::string(side) +
                                                        " repeats dialogue '" + d.id + "'");
    it->second.insert(d.quads.begin(), d.quads.end());
  }
  return out;
}

}  // namespace

std::vector<DialogueQuads> GoldQuads(const std::vector<Dialogue>& dialogues) {
  std::vector<DialogueQuads> out;
  for (const Dialogue& d : dialogues) out.push_back({d.id, d.gold_quads});
  return out;
}

double MetricCounts::precision() const {
  return predicted == 0 ? 0.0 : static_cast<double>(matched) / predicted;
}

double MetricCounts::recall() const {
  return gold == 0 ? 0.0 : static_cast<double>(matched) / gold;
}

double MetricCounts::f1() const {
  const double p = precision(), r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

MetricCounts& MetricCounts::operator+=(const MetricCounts& o) {
  gold += o.gold;
  predicted += o.predicted;
  matched += o.matched;
  return *this;
}

nlohmann::json MetricCounts::ToJson() const {
  return {{"precision", precision()}, {"recall", recall()}, {"f1", f1()},
          {"gold", gold},             {"predicted", predicted}, {"matched", matched}};
}

nlohmann::json EvalReport::ToJson(bool verbose) const {
  nlohmann::json j = {{"dialogues", dialogues},  {"micro_f1", micro.f1()},
                      {"iden_f1", iden.f1()},    {"intra_f1", intra.f1()},
                      {"inter_f1", inter.f1()},  {"micro", micro.ToJson()},
                      {"iden", iden.ToJson()},   {"intra", intra.ToJson()},
                      {"inter", inter.ToJson()}};
  if (verbose) {
    // Exact matches share spans, so restricting by gold locality or by
    // predicted locality selects the same matched set.
    j["locality_restriction"] = {{"prediction", {{"intra", intra.ToJson()},
                                                 {"inter", inter.ToJson()}}},
                                 {"gold", {{"intra", intra.ToJson()},
                                           {"inter", inter.ToJson()}}}};
  }
  return j;
}

EvalReport Evaluate(const std::vector<DialogueQuads>& predicted,
                    const std::vector<DialogueQuads>& gold) {
  const auto pred = Index(predicted, "predictions");
  const auto ref = Index(gold, "gold");
  for (const auto& [id, _] : pred) {
    if (!ref.count(id)) {
      throw Error(ErrorCode::kIdMismatch, "prediction for unknown dialogue '" + id + "'");
    }
  }
  EvalReport r;
  for (const auto& [id, g] : ref) {
    auto it = pred.find(id);
    if (it == pred.end()) {
      throw Error(ErrorCode::kIdMismatch, "no prediction for dialogue '" + id + "'");
    }
    const std::set<Quadruple>& p = it->second;
    r.micro += Count(p, g);
    const auto pt = Triples(p), gt = Triples(g);
    r.iden += MetricCounts{static_cast<int>(gt.size()), static_cast<int>(pt.size()),
                           Overlap(pt, gt)};
    r.intra += Count(WithLocality(p, Locality::kIntra), WithLocality(g, Locality::kIntra));
    r.inter += Count(WithLocality(p, Locality::kInter), WithLocality(g, Locality::kInter));
    ++r.dialogues;
  }
  return r;
}

}  // namespace diaquad
