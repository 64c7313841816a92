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

#include "diaquad/autodiff/tensor.h"

#include <sstream>

#include "diaquad/error.h"

namespace diaquad::ad {

std::string ShapeString(const Shape& shape) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) os << "x";
    os << shape[i];
  }
  os << "]";
  return os.str();
}

int NumElements(const Shape& shape) {
  int n = 1;
  for (int s : shape) n *= s;
  return n;
}

std::vector<double>& Node::EnsureGrad() {
  if (grad.size() != value.size()) grad.assign(value.size(), 0.0);
  return grad;
}

Tensor Tensor::Zeros(Shape shape, bool requires_grad) {
  return Full(std::move(shape), 0.0, requires_grad);
}

Tensor Tensor::Full(Shape shape, double value, bool requires_grad) {
  auto node = std::make_shared<Node>();
  node->value.assign(NumElements(shape), value);
  node->shape = std::move(shape);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::FromValues(Shape shape, std::vector<double> values,
                          bool requires_grad) {
  if (static_cast<int>(values.size()) != NumElements(shape)) {
    throw Error(ErrorCode::kShapeMismatch,
                "shape " + ShapeString(shape) + " needs " +
                    std::to_string(NumElements(shape)) + " values, got " +
                    std::to_string(values.size()));
  }
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->value = std::move(values);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::Scalar(double value, bool requires_grad) {
  return FromValues({1}, {value}, requires_grad);
}

double Tensor::item() const {
  if (size() != 1) {
    throw Error(ErrorCode::kNotScalar,
                "item() on tensor of shape " + ShapeString(shape()));
  }
  return node_->value[0];
}

std::vector<double> Tensor::grad() const {
  if (node_->grad.empty()) return std::vector<double>(node_->value.size(), 0.0);
  return node_->grad;
}

Tape& Tape::Current() {
  thread_local Tape tape;
  return tape;
}

void Tape::Record(std::shared_ptr<Node> out, BackwardFn fn) {
  entries_.push_back({std::move(out), std::move(fn)});
}

void Tape::Backward(const Tensor& loss) {
  if (!loss.defined() || loss.size() != 1) {
    throw Error(ErrorCode::kNotScalar,
                "backward needs a scalar loss, got shape " +
                    (loss.defined() ? ShapeString(loss.shape()) : "[]"));
  }
  if (!loss.requires_grad()) {
    entries_.clear();
    return;
  }
  loss.node()->EnsureGrad()[0] += 1.0;
  // Moving the entries out first keeps the tape consistent if a backward
  // function throws.
  std::vector<Entry> entries = std::move(entries_);
  entries_.clear();
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    if (it->out->grad.empty()) continue;  // not on a path to the loss
    it->fn(*it->out);
  }
}

void Backward(const Tensor& loss) { Tape::Current().Backward(loss); }

}  // namespace diaquad::ad
