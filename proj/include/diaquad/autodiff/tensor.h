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

#ifndef DIAQUAD_AUTODIFF_TENSOR_H_
#define DIAQUAD_AUTODIFF_TENSOR_H_

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace diaquad::ad {

using Shape = std::vector<int>;

std::string ShapeString(const Shape& shape);
int NumElements(const Shape& shape);

struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;  // empty until first accumulation
  bool requires_grad = false;

  // Sizes grad to match value, zero-filled, if it is not allocated yet.
  std::vector<double>& EnsureGrad();
};

// Dense row-major array with value semantics for the handle and shared
// storage for the data. Copies alias the same node.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  static Tensor Zeros(Shape shape, bool requires_grad = false);
  static Tensor Full(Shape shape, double value, bool requires_grad = false);
  static Tensor FromValues(Shape shape, std::vector<double> values,
                           bool requires_grad = false);
  static Tensor Scalar(double value, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  int rank() const { return static_cast<int>(node_->shape.size()); }
  int dim(int axis) const { return node_->shape.at(axis); }
  int rows() const { return node_->shape.at(0); }
  int cols() const { return node_->shape.at(1); }
  int size() const { return static_cast<int>(node_->value.size()); }

  std::span<const double> values() const { return node_->value; }
  std::span<double> mutable_values() { return node_->value; }
  double at(int r, int c) const { return node_->value[r * cols() + c]; }
  double item() const;

  bool requires_grad() const { return node_->requires_grad; }
  bool has_grad() const { return !node_->grad.empty(); }
  // Zeros when no gradient has been accumulated.
  std::vector<double> grad() const;
  void ZeroGrad() const { node_->grad.clear(); }

  const std::shared_ptr<Node>& node() const { return node_; }

 private:
  std::shared_ptr<Node> node_;
};

// Ordered record of differentiable operations executed on this thread.
// Entries are appended in execution order, which is a topological order of
// the computation graph.
class Tape {
 public:
  using BackwardFn = std::function<void(const Node& out)>;

  static Tape& Current();

  bool recording() const { return disabled_ == 0; }
  void Record(std::shared_ptr<Node> out, BackwardFn fn);
  size_t size() const { return entries_.size(); }
  void Clear() { entries_.clear(); }

  // Seeds d(loss)/d(loss) = 1 and walks the tape in reverse once; the tape
  // is empty afterwards. Throws kNotScalar for non-scalar losses.
  void Backward(const Tensor& loss);

 private:
  friend class NoGradGuard;

  struct Entry {
    std::shared_ptr<Node> out;
    BackwardFn fn;
  };

  int disabled_ = 0;  // > 0 while a NoGradGuard is alive
  std::vector<Entry> entries_;
};

// Disables recording on the current thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard() { ++Tape::Current().disabled_; }
  ~NoGradGuard() { --Tape::Current().disabled_; }
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;
};

void Backward(const Tensor& loss);

}  // namespace diaquad::ad

#endif  // DIAQUAD_AUTODIFF_TENSOR_H_
