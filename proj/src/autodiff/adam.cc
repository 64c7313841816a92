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

#include "diaquad/autodiff/adam.h"

#include <cmath>

#include "diaquad/error.h"

namespace diaquad::ad {

using nlohmann::json;

void AdamStep(AdamState& state, std::span<Tensor> params,
              std::span<const std::vector<double>> grads,
              std::span<const double> learning_rates) {
  if (grads.size() != params.size() || learning_rates.size() != params.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "adam: " + std::to_string(params.size()) + " params, " +
                    std::to_string(grads.size()) + " grads, " +
                    std::to_string(learning_rates.size()) + " rates");
  }
  if (state.first.empty()) {
    for (const Tensor& p : params) {
      state.first.emplace_back(p.size(), 0.0);
      state.second.emplace_back(p.size(), 0.0);
    }
  }
  if (state.first.size() != params.size()) {
    throw Error(ErrorCode::kShapeMismatch, "adam: moment count mismatch");
  }
  for (size_t k = 0; k < params.size(); ++k) {
    if (static_cast<int>(grads[k].size()) != params[k].size() ||
        static_cast<int>(state.first[k].size()) != params[k].size()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "adam: parameter " + std::to_string(k) + " of shape " +
                      ShapeString(params[k].shape()) + " vs gradient size " +
                      std::to_string(grads[k].size()));
    }
  }

  ++state.step;
  const AdamHyper& hp = state.hyper;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(hp.beta1, t);
  const double c2 = 1.0 - std::pow(hp.beta2, t);
  for (size_t k = 0; k < params.size(); ++k) {
    std::span<double> values = params[k].mutable_values();
    std::vector<double>& m = state.first[k];
    std::vector<double>& v = state.second[k];
    const double lr = learning_rates[k];
    for (size_t i = 0; i < values.size(); ++i) {
      const double g = grads[k][i];
      m[i] = hp.beta1 * m[i] + (1.0 - hp.beta1) * g;
      v[i] = hp.beta2 * v[i] + (1.0 - hp.beta2) * g * g;
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      values[i] -= lr * m_hat / (std::sqrt(v_hat) + hp.epsilon);
    }
  }
}

Adam::Adam(double encoder_lr, double other_lr, AdamHyper hyper)
    : encoder_lr_(encoder_lr), other_lr_(other_lr) {
  state_.hyper = hyper;
}

void Adam::Step(ParamStore& store) {
  std::vector<Tensor> params;
  std::vector<std::vector<double>> grads;
  std::vector<double> rates;
  for (const Parameter& p : store.params()) {
    params.push_back(p.value);
    grads.push_back(p.value.grad());
    rates.push_back(p.group == ParamGroup::kEncoder ? encoder_lr_ : other_lr_);
  }
  AdamStep(state_, params, grads, rates);
}

json Adam::ToJson(const ParamStore& store) const {
  json moments = json::array();
  for (size_t k = 0; k < state_.first.size(); ++k) {
    moments.push_back({{"name", store.params()[k].name},
                       {"m", state_.first[k]},
                       {"v", state_.second[k]}});
  }
  return {{"type", "adam"},
          {"step", state_.step},
          {"beta1", state_.hyper.beta1},
          {"beta2", state_.hyper.beta2},
          {"epsilon", state_.hyper.epsilon},
          {"encoder_lr", encoder_lr_},
          {"other_lr", other_lr_},
          {"moments", moments}};
}

void Adam::LoadJson(const json& j, const ParamStore& store) {
  state_.step = j.at("step").get<int64_t>();
  state_.hyper.beta1 = j.at("beta1").get<double>();
  state_.hyper.beta2 = j.at("beta2").get<double>();
  state_.hyper.epsilon = j.at("epsilon").get<double>();
  encoder_lr_ = j.at("encoder_lr").get<double>();
  other_lr_ = j.at("other_lr").get<double>();
  state_.first.clear();
  state_.second.clear();
  const json& moments = j.at("moments");
  if (moments.empty()) return;
  if (moments.size() != store.params().size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "optimizer state holds " + std::to_string(moments.size()) +
                    " moments for " + std::to_string(store.params().size()) +
                    " parameters");
  }
  for (size_t k = 0; k < moments.size(); ++k) {
    const Parameter& p = store.params()[k];
    if (moments[k].at("name").get<std::string>() != p.name) {
      throw Error(ErrorCode::kShapeMismatch,
                  "optimizer moment " + std::to_string(k) + " belongs to " +
                      moments[k].at("name").get<std::string>() + ", expected " +
                      p.name);
    }
    auto m = moments[k].at("m").get<std::vector<double>>();
    auto v = moments[k].at("v").get<std::vector<double>>();
    if (static_cast<int>(m.size()) != p.value.size() ||
        static_cast<int>(v.size()) != p.value.size()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "optimizer moments for " + p.name + " have wrong size");
    }
    state_.first.push_back(std::move(m));
    state_.second.push_back(std::move(v));
  }
}

}  // namespace diaquad::ad
