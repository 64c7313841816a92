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

#include "diaquad/autodiff/ops.h"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>

#include "diaquad/error.h"

namespace diaquad::ad {

namespace {

using NodePtr = std::shared_ptr<Node>;

[[noreturn]] void ShapeError(const std::string& op, const std::string& what) {
  throw Error(ErrorCode::kShapeMismatch, op + ": " + what);
}

void RequireMatrix(const Tensor& t, const char* op) {
  if (!t.defined() || t.rank() != 2) {
    ShapeError(op, "expected a matrix, got " +
                       (t.defined() ? ShapeString(t.shape()) : "undefined"));
  }
}

bool NeedsGrad(std::initializer_list<const Tensor*> inputs) {
  if (!Tape::Current().recording()) return false;
  for (const Tensor* t : inputs) {
    if (t->requires_grad()) return true;
  }
  return false;
}

bool NeedsGrad(std::span<const Tensor> inputs) {
  if (!Tape::Current().recording()) return false;
  for (const Tensor& t : inputs) {
    if (t.requires_grad()) return true;
  }
  return false;
}

// Wraps a computed value; when needs_grad the node is recorded with fn.
Tensor Finish(Shape shape, std::vector<double> value, bool needs_grad,
              Tape::BackwardFn fn) {
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->value = std::move(value);
  if (needs_grad) {
    node->requires_grad = true;
    Tape::Current().Record(node, std::move(fn));
  }
  return Tensor(std::move(node));
}

// Applies fn(index) to grad of in when it participates in differentiation.
template <typename Fn>
void Accumulate(const NodePtr& in, Fn fn) {
  if (!in->requires_grad) return;
  std::vector<double>& g = in->EnsureGrad();
  fn(g);
}

struct Broadcast {
  int rows, cols;
  int ar, ac, br, bc;
};

Broadcast BroadcastShapes(const Tensor& a, const Tensor& b, const char* op) {
  RequireMatrix(a, op);
  RequireMatrix(b, op);
  Broadcast s{0, 0, a.rows(), a.cols(), b.rows(), b.cols()};
  auto merge = [&](int x, int y) {
    if (x == y || y == 1) return x;
    if (x == 1) return y;
    ShapeError(op, ShapeString(a.shape()) + " vs " + ShapeString(b.shape()));
  };
  s.rows = merge(s.ar, s.br);
  s.cols = merge(s.ac, s.bc);
  return s;
}

inline int BIndex(int r, int c, int rows, int cols) {
  return (rows == 1 ? 0 : r) * cols + (cols == 1 ? 0 : c);
}

template <typename Forward, typename DA, typename DB>
Tensor BroadcastBinary(const Tensor& a, const Tensor& b, const char* op,
                       Forward forward, DA da, DB db) {
  if (a.defined() && b.defined() && a.shape() == b.shape() && a.rank() != 2) {
    // Same-shape elementwise for any rank.
    std::vector<double> out(a.size());
    for (int i = 0; i < a.size(); ++i) {
      out[i] = forward(a.values()[i], b.values()[i]);
    }
    NodePtr an = a.node(), bn = b.node();
    return Finish(a.shape(), std::move(out), NeedsGrad({&a, &b}),
                  [an, bn, da, db](const Node& o) {
                    Accumulate(an, [&](std::vector<double>& g) {
                      for (size_t i = 0; i < g.size(); ++i) {
                        g[i] += o.grad[i] * da(an->value[i], bn->value[i]);
                      }
                    });
                    Accumulate(bn, [&](std::vector<double>& g) {
                      for (size_t i = 0; i < g.size(); ++i) {
                        g[i] += o.grad[i] * db(an->value[i], bn->value[i]);
                      }
                    });
                  });
  }
  const Broadcast s = BroadcastShapes(a, b, op);
  std::vector<double> out(static_cast<size_t>(s.rows) * s.cols);
  const auto av = a.values();
  const auto bv = b.values();
  for (int r = 0; r < s.rows; ++r) {
    for (int c = 0; c < s.cols; ++c) {
      out[r * s.cols + c] = forward(av[BIndex(r, c, s.ar, s.ac)],
                                    bv[BIndex(r, c, s.br, s.bc)]);
    }
  }
  NodePtr an = a.node(), bn = b.node();
  return Finish({s.rows, s.cols}, std::move(out), NeedsGrad({&a, &b}),
                [an, bn, s, da, db](const Node& o) {
                  for (int r = 0; r < s.rows; ++r) {
                    for (int c = 0; c < s.cols; ++c) {
                      const int ia = BIndex(r, c, s.ar, s.ac);
                      const int ib = BIndex(r, c, s.br, s.bc);
                      const double go = o.grad[r * s.cols + c];
                      if (an->requires_grad) {
                        an->EnsureGrad()[ia] +=
                            go * da(an->value[ia], bn->value[ib]);
                      }
                      if (bn->requires_grad) {
                        bn->EnsureGrad()[ib] +=
                            go * db(an->value[ia], bn->value[ib]);
                      }
                    }
                  }
                });
}

template <typename Forward, typename Derivative>
Tensor Unary(const Tensor& a, Forward forward, Derivative derivative) {
  std::vector<double> out(a.size());
  for (int i = 0; i < a.size(); ++i) out[i] = forward(a.values()[i]);
  NodePtr an = a.node();
  return Finish(a.shape(), std::move(out), NeedsGrad({&a}),
                [an, derivative](const Node& o) {
                  Accumulate(an, [&](std::vector<double>& g) {
                    for (size_t i = 0; i < g.size(); ++i) {
                      g[i] += o.grad[i] * derivative(an->value[i], o.value[i]);
                    }
                  });
                });
}

uint64_t SplitMix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Tensor MatMul(const Tensor& a, const Tensor& b) {
  RequireMatrix(a, "matmul");
  RequireMatrix(b, "matmul");
  const int m = a.rows(), k = a.cols(), n = b.cols();
  if (b.rows() != k) {
    ShapeError("matmul", ShapeString(a.shape()) + " x " + ShapeString(b.shape()));
  }
  std::vector<double> out(static_cast<size_t>(m) * n, 0.0);
  const double* av = a.values().data();
  const double* bv = b.values().data();
  for (int i = 0; i < m; ++i) {
    double* row = out.data() + i * n;
    for (int p = 0; p < k; ++p) {
      const double x = av[i * k + p];
      if (x == 0.0) continue;
      const double* brow = bv + p * n;
      for (int j = 0; j < n; ++j) row[j] += x * brow[j];
    }
  }
  NodePtr an = a.node(), bn = b.node();
  return Finish({m, n}, std::move(out), NeedsGrad({&a, &b}),
                [an, bn, m, k, n](const Node& o) {
                  const double* go = o.grad.data();
                  Accumulate(an, [&](std::vector<double>& g) {
                    // dA = dC * B^T
                    for (int i = 0; i < m; ++i) {
                      for (int p = 0; p < k; ++p) {
                        double acc = 0.0;
                        const double* brow = bn->value.data() + p * n;
                        const double* grow = go + i * n;
                        for (int j = 0; j < n; ++j) acc += grow[j] * brow[j];
                        g[i * k + p] += acc;
                      }
                    }
                  });
                  Accumulate(bn, [&](std::vector<double>& g) {
                    // dB = A^T * dC
                    for (int i = 0; i < m; ++i) {
                      const double* grow = go + i * n;
                      for (int p = 0; p < k; ++p) {
                        const double x = an->value[i * k + p];
                        if (x == 0.0) continue;
                        double* gb = g.data() + p * n;
                        for (int j = 0; j < n; ++j) gb[j] += x * grow[j];
                      }
                    }
                  });
                });
}

Tensor Add(const Tensor& a, const Tensor& b) {
  return BroadcastBinary(
      a, b, "add", [](double x, double y) { return x + y; },
      [](double, double) { return 1.0; }, [](double, double) { return 1.0; });
}

Tensor Sub(const Tensor& a, const Tensor& b) {
  return BroadcastBinary(
      a, b, "sub", [](double x, double y) { return x - y; },
      [](double, double) { return 1.0; }, [](double, double) { return -1.0; });
}

Tensor Mul(const Tensor& a, const Tensor& b) {
  return BroadcastBinary(
      a, b, "mul", [](double x, double y) { return x * y; },
      [](double, double y) { return y; }, [](double x, double) { return x; });
}

Tensor Scale(const Tensor& a, double s) {
  return Unary(
      a, [s](double x) { return s * x; }, [s](double, double) { return s; });
}

Tensor ConcatCols(std::span<const Tensor> parts) {
  if (parts.empty()) ShapeError("concat", "no operands");
  const int rows = parts[0].defined() && parts[0].rank() == 2 ? parts[0].rows() : -1;
  int cols = 0;
  std::vector<int> offsets;
  for (const Tensor& p : parts) {
    RequireMatrix(p, "concat");
    if (p.rows() != rows) {
      ShapeError("concat", "row counts differ: " + ShapeString(parts[0].shape()) +
                               " vs " + ShapeString(p.shape()));
    }
    offsets.push_back(cols);
    cols += p.cols();
  }
  std::vector<double> out(static_cast<size_t>(rows) * cols);
  for (size_t k = 0; k < parts.size(); ++k) {
    const int w = parts[k].cols();
    for (int r = 0; r < rows; ++r) {
      std::copy_n(parts[k].values().data() + r * w, w,
                  out.data() + r * cols + offsets[k]);
    }
  }
  std::vector<NodePtr> nodes;
  for (const Tensor& p : parts) nodes.push_back(p.node());
  return Finish({rows, cols}, std::move(out), NeedsGrad(parts),
                [nodes, offsets, rows, cols](const Node& o) {
                  for (size_t k = 0; k < nodes.size(); ++k) {
                    const int w = nodes[k]->shape[1];
                    Accumulate(nodes[k], [&](std::vector<double>& g) {
                      for (int r = 0; r < rows; ++r) {
                        for (int c = 0; c < w; ++c) {
                          g[r * w + c] += o.grad[r * cols + offsets[k] + c];
                        }
                      }
                    });
                  }
                });
}

Tensor ConcatRows(std::span<const Tensor> parts) {
  if (parts.empty()) ShapeError("concat_rows", "no operands");
  RequireMatrix(parts[0], "concat_rows");
  const int cols = parts[0].cols();
  int rows = 0;
  std::vector<int> offsets;
  for (const Tensor& p : parts) {
    RequireMatrix(p, "concat_rows");
    if (p.cols() != cols) {
      ShapeError("concat_rows", ShapeString(parts[0].shape()) + " vs " +
                                    ShapeString(p.shape()));
    }
    offsets.push_back(rows);
    rows += p.rows();
  }
  std::vector<double> out;
  out.reserve(static_cast<size_t>(rows) * cols);
  for (const Tensor& p : parts) {
    out.insert(out.end(), p.values().begin(), p.values().end());
  }
  std::vector<NodePtr> nodes;
  for (const Tensor& p : parts) nodes.push_back(p.node());
  return Finish({rows, cols}, std::move(out), NeedsGrad(parts),
                [nodes, offsets, cols](const Node& o) {
                  for (size_t k = 0; k < nodes.size(); ++k) {
                    Accumulate(nodes[k], [&](std::vector<double>& g) {
                      const double* src = o.grad.data() + offsets[k] * cols;
                      for (size_t i = 0; i < g.size(); ++i) g[i] += src[i];
                    });
                  }
                });
}

Tensor SliceCols(const Tensor& a, int begin, int end) {
  RequireMatrix(a, "slice");
  if (begin < 0 || end > a.cols() || begin >= end) {
    ShapeError("slice", "columns [" + std::to_string(begin) + "," +
                            std::to_string(end) + ") of " +
                            ShapeString(a.shape()));
  }
  const int rows = a.rows(), cols = a.cols(), w = end - begin;
  std::vector<double> out(static_cast<size_t>(rows) * w);
  for (int r = 0; r < rows; ++r) {
    std::copy_n(a.values().data() + r * cols + begin, w, out.data() + r * w);
  }
  NodePtr an = a.node();
  return Finish({rows, w}, std::move(out), NeedsGrad({&a}),
                [an, rows, cols, begin, w](const Node& o) {
                  Accumulate(an, [&](std::vector<double>& g) {
                    for (int r = 0; r < rows; ++r) {
                      for (int c = 0; c < w; ++c) {
                        g[r * cols + begin + c] += o.grad[r * w + c];
                      }
                    }
                  });
                });
}

std::vector<Tensor> SplitCols(const Tensor& a, std::span<const int> widths) {
  std::vector<Tensor> out;
  int begin = 0;
  for (int w : widths) {
    out.push_back(SliceCols(a, begin, begin + w));
    begin += w;
  }
  if (begin != a.cols()) {
    ShapeError("split", "widths do not cover " + ShapeString(a.shape()));
  }
  return out;
}

Tensor GatherRows(const Tensor& a, std::span<const int> rows) {
  RequireMatrix(a, "gather_rows");
  const int cols = a.cols();
  std::vector<int> idx(rows.begin(), rows.end());
  std::vector<double> out(idx.size() * cols);
  for (size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= a.rows()) {
      ShapeError("gather_rows", "row " + std::to_string(idx[k]) + " of " +
                                    ShapeString(a.shape()));
    }
    std::copy_n(a.values().data() + idx[k] * cols, cols, out.data() + k * cols);
  }
  NodePtr an = a.node();
  const int n = static_cast<int>(idx.size());
  return Finish({n, cols}, std::move(out), NeedsGrad({&a}),
                [an, idx, cols](const Node& o) {
                  Accumulate(an, [&](std::vector<double>& g) {
                    for (size_t k = 0; k < idx.size(); ++k) {
                      for (int c = 0; c < cols; ++c) {
                        g[idx[k] * cols + c] += o.grad[k * cols + c];
                      }
                    }
                  });
                });
}

Tensor ScatterAddRows(const Tensor& a, std::span<const int> rows, int n_rows) {
  RequireMatrix(a, "scatter_rows");
  if (static_cast<int>(rows.size()) != a.rows()) {
    ShapeError("scatter_rows", "index count " + std::to_string(rows.size()) +
                                   " vs " + ShapeString(a.shape()));
  }
  const int cols = a.cols();
  std::vector<int> idx(rows.begin(), rows.end());
  std::vector<double> out(static_cast<size_t>(n_rows) * cols, 0.0);
  for (size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= n_rows) {
      ShapeError("scatter_rows", "target row " + std::to_string(idx[k]));
    }
    for (int c = 0; c < cols; ++c) {
      out[idx[k] * cols + c] += a.values()[k * cols + c];
    }
  }
  NodePtr an = a.node();
  return Finish({n_rows, cols}, std::move(out), NeedsGrad({&a}),
                [an, idx, cols](const Node& o) {
                  Accumulate(an, [&](std::vector<double>& g) {
                    for (size_t k = 0; k < idx.size(); ++k) {
                      for (int c = 0; c < cols; ++c) {
                        g[k * cols + c] += o.grad[idx[k] * cols + c];
                      }
                    }
                  });
                });
}

Tensor IndexSelect(const Tensor& a, std::vector<int> index, Shape shape) {
  if (static_cast<int>(index.size()) != NumElements(shape)) {
    ShapeError("index_select", "index count does not match " + ShapeString(shape));
  }
  std::vector<double> out(index.size());
  for (size_t c = 0; c < index.size(); ++c) {
    if (index[c] < 0 || index[c] >= a.size()) {
      ShapeError("index_select", "index " + std::to_string(index[c]) +
                                     " outside " + ShapeString(a.shape()));
    }
    out[c] = a.values()[index[c]];
  }
  NodePtr an = a.node();
  return Finish(std::move(shape), std::move(out), NeedsGrad({&a}),
                [an, index = std::move(index)](const Node& o) {
                  Accumulate(an, [&](std::vector<double>& g) {
                    for (size_t c = 0; c < index.size(); ++c) {
                      g[index[c]] += o.grad[c];
                    }
                  });
                });
}

Tensor Transpose(const Tensor& a) {
  RequireMatrix(a, "transpose");
  const int rows = a.rows(), cols = a.cols();
  std::vector<double> out(a.size());
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) out[c * rows + r] = a.values()[r * cols + c];
  }
  NodePtr an = a.node();
  return Finish({cols, rows}, std::move(out), NeedsGrad({&a}),
                [an, rows, cols](const Node& o) {
                  Accumulate(an, [&](std::vector<double>& g) {
                    for (int r = 0; r < rows; ++r) {
                      for (int c = 0; c < cols; ++c) {
                        g[r * cols + c] += o.grad[c * rows + r];
                      }
                    }
                  });
                });
}

Tensor Reshape(const Tensor& a, Shape shape) {
  if (NumElements(shape) != a.size()) {
    ShapeError("reshape", ShapeString(a.shape()) + " -> " + ShapeString(shape));
  }
  std::vector<double> out(a.values().begin(), a.values().end());
  NodePtr an = a.node();
  return Finish(std::move(shape), std::move(out), NeedsGrad({&a}),
                [an](const Node& o) {
                  Accumulate(an, [&](std::vector<double>& g) {
                    for (size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i];
                  });
                });
}

Tensor Relu(const Tensor& a) {
  return Unary(
      a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor LeakyRelu(const Tensor& a, double slope) {
  return Unary(
      a, [slope](double x) { return x > 0.0 ? x : slope * x; },
      [slope](double x, double) { return x > 0.0 ? 1.0 : slope; });
}

Tensor Sigmoid(const Tensor& a) {
  return Unary(
      a,
      [](double x) {
        if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor Tanh(const Tensor& a) {
  return Unary(
      a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

namespace {

// Softmax along rows (stride 1) or columns; keep may be null.
Tensor SoftmaxImpl(const Tensor& a, bool along_rows,
                   const std::vector<bool>* keep) {
  const int rows = a.rows(), cols = a.cols();
  const int lines = along_rows ? rows : cols;
  const int len = along_rows ? cols : rows;
  auto at = [along_rows, cols](int line, int k) {
    return along_rows ? line * cols + k : k * cols + line;
  };
  std::vector<double> out(a.size(), 0.0);
  const auto v = a.values();
  for (int line = 0; line < lines; ++line) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < len; ++k) {
      const int i = at(line, k);
      if (keep && !(*keep)[i]) continue;
      mx = std::max(mx, v[i]);
    }
    if (mx == -std::numeric_limits<double>::infinity()) {
      throw Error(ErrorCode::kInvariant,
                  "softmax line " + std::to_string(line) + " has no entries");
    }
    double z = 0.0;
    for (int k = 0; k < len; ++k) {
      const int i = at(line, k);
      if (keep && !(*keep)[i]) continue;
      out[i] = std::exp(v[i] - mx);
      z += out[i];
    }
    for (int k = 0; k < len; ++k) out[at(line, k)] /= z;
  }
  NodePtr an = a.node();
  return Finish(a.shape(), std::move(out), NeedsGrad({&a}),
                [an, lines, len, at](const Node& o) {
                  Accumulate(an, [&](std::vector<double>& g) {
                    for (int line = 0; line < lines; ++line) {
                      double dot = 0.0;
                      for (int k = 0; k < len; ++k) {
                        const int i = at(line, k);
                        dot += o.grad[i] * o.value[i];
                      }
                      for (int k = 0; k < len; ++k) {
                        const int i = at(line, k);
                        g[i] += o.value[i] * (o.grad[i] - dot);
                      }
                    }
                  });
                });
}

}  // namespace

Tensor Softmax(const Tensor& a, int axis) {
  RequireMatrix(a, "softmax");
  if (axis != 0 && axis != 1 && axis != -1) {
    ShapeError("softmax", "axis " + std::to_string(axis) + " invalid for " +
                              ShapeString(a.shape()));
  }
  return SoftmaxImpl(a, axis != 0, nullptr);
}

Tensor MaskedSoftmaxRows(const Tensor& a, const std::vector<bool>& keep) {
  RequireMatrix(a, "masked_softmax");
  if (static_cast<int>(keep.size()) != a.size()) {
    ShapeError("masked_softmax", "mask size does not match " +
                                     ShapeString(a.shape()));
  }
  return SoftmaxImpl(a, true, &keep);
}

Tensor EmbeddingLookup(const Tensor& table, std::span<const int> ids) {
  return GatherRows(table, ids);
}

double CounterUniform(uint64_t seed, uint64_t layer, uint64_t step,
                      uint64_t index) {
  uint64_t h = SplitMix(seed);
  h = SplitMix(h ^ layer);
  h = SplitMix(h ^ step);
  h = SplitMix(h ^ index);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

Tensor Dropout(const Tensor& a, double rate, bool train, DropoutKey key) {
  if (!train || rate <= 0.0) return a;
  if (rate >= 1.0) {
    throw Error(ErrorCode::kBadConfig, "dropout rate must lie in [0, 1)");
  }
  std::vector<double> mask(a.size());
  const double keep_scale = 1.0 / (1.0 - rate);
  for (int i = 0; i < a.size(); ++i) {
    mask[i] = CounterUniform(key.seed, key.layer, key.step, i) < rate
                  ? 0.0
                  : keep_scale;
  }
  std::vector<double> out(a.size());
  for (int i = 0; i < a.size(); ++i) out[i] = a.values()[i] * mask[i];
  NodePtr an = a.node();
  return Finish(a.shape(), std::move(out), NeedsGrad({&a}),
                [an, mask = std::move(mask)](const Node& o) {
                  Accumulate(an, [&](std::vector<double>& g) {
                    for (size_t i = 0; i < g.size(); ++i) {
                      g[i] += o.grad[i] * mask[i];
                    }
                  });
                });
}

Tensor Sum(const Tensor& a) {
  double s = 0.0;
  for (double x : a.values()) s += x;
  NodePtr an = a.node();
  return Finish({1}, {s}, NeedsGrad({&a}), [an](const Node& o) {
    Accumulate(an, [&](std::vector<double>& g) {
      for (double& x : g) x += o.grad[0];
    });
  });
}

Tensor Mean(const Tensor& a) {
  return Scale(Sum(a), 1.0 / static_cast<double>(a.size()));
}

Tensor WeightedNll(const Tensor& probs, std::span<const int> gold,
                   std::span<const double> weights, double eps,
                   double normalizer) {
  RequireMatrix(probs, "weighted_nll");
  const int cells = probs.rows(), labels = probs.cols();
  if (static_cast<int>(gold.size()) != cells ||
      static_cast<int>(weights.size()) != labels) {
    ShapeError("weighted_nll",
               "probs " + ShapeString(probs.shape()) + " vs " +
                   std::to_string(gold.size()) + " gold cells and " +
                   std::to_string(weights.size()) + " label weights");
  }
  std::vector<int> g(gold.begin(), gold.end());
  std::vector<double> w(weights.begin(), weights.end());
  double total = 0.0;
  for (int c = 0; c < cells; ++c) {
    if (g[c] < 0 || g[c] >= labels) {
      ShapeError("weighted_nll", "gold label " + std::to_string(g[c]));
    }
    const double p = probs.values()[c * labels + g[c]];
    total -= w[g[c]] * std::log(std::max(p, eps));
  }
  total /= normalizer;
  NodePtr pn = probs.node();
  return Finish({1}, {total}, NeedsGrad({&probs}),
                [pn, g = std::move(g), w = std::move(w), labels, eps,
                 normalizer](const Node& o) {
                  Accumulate(pn, [&](std::vector<double>& grad) {
                    for (size_t c = 0; c < g.size(); ++c) {
                      const int i = static_cast<int>(c) * labels + g[c];
                      const double p = pn->value[i];
                      if (p > eps) {
                        grad[i] -= o.grad[0] * w[g[c]] / (p * normalizer);
                      }
                    }
                  });
                });
}

}  // namespace diaquad::ad
