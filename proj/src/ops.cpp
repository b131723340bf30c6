#include "hmn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "hmn/error.hpp"

namespace hmn::ops {
namespace {

using detail::Node;
using NodePtr = std::shared_ptr<Node>;

// Builds the output node; history is kept only when some input needs grad.
Tensor make_result(OpKind op, Shape shape, std::vector<double> value, std::vector<NodePtr> inputs,
                   std::function<void(Node&)> backward_fn) {
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->value = std::move(value);
  node->op = op;
  const bool needs = grad_enabled() && std::any_of(inputs.begin(), inputs.end(), [](const NodePtr& n) { return n->requires_grad; });
  if (needs) {
    node->requires_grad = true;
    node->inputs = std::move(inputs);
    node->backward = std::move(backward_fn);
  }
  return Tensor::from_node(std::move(node));
}

void require_rank(const Tensor& t, std::size_t rank, const char* op) {
  if (t.rank() != rank) {
    throw DimensionError(std::string(op) + ": expected rank " + std::to_string(rank) + " tensor, got " +
                         shape_to_string(t.shape()));
  }
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_to_string(a.shape()) + " vs " +
                         shape_to_string(b.shape()));
  }
}

// c[m x n] += a[m x k] * b[k x n]
void gemm_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    const double* arow = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank(a, 2, "matmul");
  require_rank(b, 2, "matmul");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    throw DimensionError("matmul: inner dimensions differ, " + shape_to_string(a.shape()) + " x " +
                         shape_to_string(b.shape()));
  }
  std::vector<double> out(m * n, 0.0);
  gemm_acc(a.data().data(), b.data().data(), out.data(), m, k, n);
  return make_result(OpKind::kMatMul, {m, n}, std::move(out), {a.node(), b.node()}, [m, k, n](Node& self) {
    Node& na = *self.inputs[0];
    Node& nb = *self.inputs[1];
    const double* g = self.grad.data();
    if (na.requires_grad) {
      // dA = G * B^T
      double* ga = na.ensure_grad().data();
      const double* bv = nb.value.data();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          double acc = 0.0;
          for (std::size_t j = 0; j < n; ++j) acc += g[i * n + j] * bv[p * n + j];
          ga[i * k + p] += acc;
        }
      }
    }
    if (nb.requires_grad) {
      // dB = A^T * G
      double* gb = nb.ensure_grad().data();
      const double* av = na.value.data();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
          const double aip = av[i * k + p];
          if (aip == 0.0) continue;
          for (std::size_t j = 0; j < n; ++j) gb[p * n + j] += aip * g[i * n + j];
        }
      }
    }
  });
}

Tensor matvec(const Tensor& w, const Tensor& x) {
  require_rank(w, 2, "matvec");
  require_rank(x, 1, "matvec");
  const std::size_t m = w.dim(0), k = w.dim(1);
  if (x.dim(0) != k) {
    throw DimensionError("matvec: inner dimensions differ, " + shape_to_string(w.shape()) + " x " +
                         shape_to_string(x.shape()));
  }
  std::vector<double> out(m, 0.0);
  const double* wv = w.data().data();
  const double* xv = x.data().data();
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    const double* row = wv + i * k;
    for (std::size_t p = 0; p < k; ++p) acc += row[p] * xv[p];
    out[i] = acc;
  }
  return make_result(OpKind::kMatVec, {m}, std::move(out), {w.node(), x.node()}, [m, k](Node& self) {
    Node& nw = *self.inputs[0];
    Node& nx = *self.inputs[1];
    const double* g = self.grad.data();
    if (nw.requires_grad) {
      double* gw = nw.ensure_grad().data();
      const double* xv = nx.value.data();
      for (std::size_t i = 0; i < m; ++i) {
        const double gi = g[i];
        if (gi == 0.0) continue;
        double* row = gw + i * k;
        for (std::size_t p = 0; p < k; ++p) row[p] += gi * xv[p];
      }
    }
    if (nx.requires_grad) {
      double* gx = nx.ensure_grad().data();
      const double* wv = nw.value.data();
      for (std::size_t i = 0; i < m; ++i) {
        const double gi = g[i];
        if (gi == 0.0) continue;
        const double* row = wv + i * k;
        for (std::size_t p = 0; p < k; ++p) gx[p] += gi * row[p];
      }
    }
  });
}

Tensor transpose(const Tensor& a) {
  require_rank(a, 2, "transpose");
  const std::size_t r = a.dim(0), c = a.dim(1);
  std::vector<double> out(r * c);
  const auto av = a.data();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[j * r + i] = av[i * c + j];
  return make_result(OpKind::kTranspose, {c, r}, std::move(out), {a.node()}, [r, c](Node& self) {
    auto& ga = self.inputs[0]->ensure_grad();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) ga[i * c + j] += self.grad[j * r + i];
  });
}

Tensor reshape(const Tensor& a, Shape shape) {
  if (shape_size(shape) != a.size()) {
    throw DimensionError("reshape: cannot view " + shape_to_string(a.shape()) + " as " + shape_to_string(shape));
  }
  std::vector<double> out(a.data().begin(), a.data().end());
  return make_result(OpKind::kReshape, std::move(shape), std::move(out), {a.node()}, [](Node& self) {
    auto& ga = self.inputs[0]->ensure_grad();
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += self.grad[i];
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  std::vector<double> out(a.size());
  const auto av = a.data();
  const auto bv = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] + bv[i];
  return make_result(OpKind::kAdd, a.shape(), std::move(out), {a.node(), b.node()}, [](Node& self) {
    for (const auto& in : self.inputs) {
      if (!in->requires_grad) continue;
      auto& g = in->ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
  });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  std::vector<double> out(a.size());
  const auto av = a.data();
  const auto bv = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
  return make_result(OpKind::kMul, a.shape(), std::move(out), {a.node(), b.node()}, [](Node& self) {
    Node& na = *self.inputs[0];
    Node& nb = *self.inputs[1];
    if (na.requires_grad) {
      auto& g = na.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * nb.value[i];
    }
    if (nb.requires_grad) {
      auto& g = nb.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * na.value[i];
    }
  });
}

Tensor scale(const Tensor& a, double factor) {
  std::vector<double> out(a.data().begin(), a.data().end());
  for (double& v : out) v *= factor;
  return make_result(OpKind::kScale, a.shape(), std::move(out), {a.node()}, [factor](Node& self) {
    auto& g = self.inputs[0]->ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * factor;
  });
}

Tensor tanh(const Tensor& a) {
  std::vector<double> out(a.data().begin(), a.data().end());
  for (double& v : out) v = std::tanh(v);
  return make_result(OpKind::kTanh, a.shape(), std::move(out), {a.node()}, [](Node& self) {
    auto& g = self.inputs[0]->ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double y = self.value[i];
      g[i] += self.grad[i] * (1.0 - y * y);
    }
  });
}

Tensor sigmoid(const Tensor& a) {
  std::vector<double> out(a.data().begin(), a.data().end());
  for (double& v : out) {
    // Branch keeps exp() from overflowing for large |v|.
    if (v >= 0) {
      v = 1.0 / (1.0 + std::exp(-v));
    } else {
      const double e = std::exp(v);
      v = e / (1.0 + e);
    }
  }
  return make_result(OpKind::kSigmoid, a.shape(), std::move(out), {a.node()}, [](Node& self) {
    auto& g = self.inputs[0]->ensure_grad();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double y = self.value[i];
      g[i] += self.grad[i] * y * (1.0 - y);
    }
  });
}

Tensor elementwise(Elementwise kind, std::span<const Tensor> inputs) {
  const bool unary = kind == Elementwise::kTanh || kind == Elementwise::kSigmoid;
  const std::size_t expected = unary ? 1 : 2;
  if (inputs.size() != expected) {
    throw UsageError("elementwise: expected " + std::to_string(expected) + " inputs, got " +
                     std::to_string(inputs.size()));
  }
  switch (kind) {
    case Elementwise::kTanh: return tanh(inputs[0]);
    case Elementwise::kSigmoid: return sigmoid(inputs[0]);
    case Elementwise::kAdd: return add(inputs[0], inputs[1]);
    case Elementwise::kMul: return mul(inputs[0], inputs[1]);
  }
  throw UsageError("elementwise: unknown kind");
}

Tensor softmax(const Tensor& z) {
  if (!z.defined() || z.rank() != 1) throw DomainError("softmax: expected a non-empty 1-D input");
  const auto zv = z.data();
  double top = zv[0];
  for (double v : zv) {
    if (!std::isfinite(v)) throw DomainError("softmax: non-finite input");
    top = std::max(top, v);
  }
  std::vector<double> out(zv.size());
  double total = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::exp(zv[i] - top);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return make_result(OpKind::kSoftmax, z.shape(), std::move(out), {z.node()}, [](Node& self) {
    // J = diag(p) - p p^T, so dz_i = p_i (g_i - <g, p>).
    auto& gz = self.inputs[0]->ensure_grad();
    double dot = 0.0;
    for (std::size_t i = 0; i < gz.size(); ++i) dot += self.grad[i] * self.value[i];
    for (std::size_t i = 0; i < gz.size(); ++i) gz[i] += self.value[i] * (self.grad[i] - dot);
  });
}

Tensor max_over_time(const Tensor& feature_map) {
  require_rank(feature_map, 2, "max_over_time");
  const std::size_t rows = feature_map.dim(0), cols = feature_map.dim(1);
  const auto fv = feature_map.data();
  std::vector<double> out(rows);
  std::vector<std::size_t> argmax(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < cols; ++j) {
      if (fv[i * cols + j] > fv[i * cols + best]) best = j;
    }
    argmax[i] = best;
    out[i] = fv[i * cols + best];
  }
  return make_result(OpKind::kMaxOverTime, {rows}, std::move(out), {feature_map.node()},
                     [argmax = std::move(argmax), cols](Node& self) {
                       auto& g = self.inputs[0]->ensure_grad();
                       for (std::size_t i = 0; i < argmax.size(); ++i) g[i * cols + argmax[i]] += self.grad[i];
                     });
}

Tensor sum(const Tensor& a) {
  double total = 0.0;
  for (double v : a.data()) total += v;
  return make_result(OpKind::kSum, {1}, {total}, {a.node()}, [](Node& self) {
    auto& g = self.inputs[0]->ensure_grad();
    for (double& v : g) v += self.grad[0];
  });
}

Tensor embedding(const Tensor& table, std::span<const int> ids, int frozen_row) {
  require_rank(table, 2, "embedding");
  if (ids.empty()) throw DimensionError("embedding: empty id sequence");
  const std::size_t rows = table.dim(0), cols = table.dim(1);
  const auto tv = table.data();
  std::vector<double> out(ids.size() * cols);
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] < 0 || static_cast<std::size_t>(ids[r]) >= rows) {
      throw DimensionError("embedding: id " + std::to_string(ids[r]) + " outside table of " + std::to_string(rows) +
                           " rows");
    }
    std::copy_n(tv.begin() + static_cast<std::ptrdiff_t>(ids[r] * cols), cols, out.begin() + r * cols);
  }
  std::vector<int> kept(ids.begin(), ids.end());
  return make_result(OpKind::kEmbedding, {ids.size(), cols}, std::move(out), {table.node()},
                     [kept = std::move(kept), cols, frozen_row](Node& self) {
                       auto& g = self.inputs[0]->ensure_grad();
                       for (std::size_t r = 0; r < kept.size(); ++r) {
                         if (kept[r] == frozen_row) continue;
                         double* dst = g.data() + static_cast<std::size_t>(kept[r]) * cols;
                         for (std::size_t j = 0; j < cols; ++j) dst[j] += self.grad[r * cols + j];
                       }
                     });
}

Tensor unfold(const Tensor& sequence, std::size_t width) {
  require_rank(sequence, 2, "unfold");
  const std::size_t n = sequence.dim(0), d = sequence.dim(1);
  if (width == 0 || width > n) {
    throw PoolingError("unfold: window of " + std::to_string(width) + " does not fit a sequence of " +
                       std::to_string(n) + "; pad the sentence to at least the widest window");
  }
  const std::size_t windows = n - width + 1;
  const std::size_t rows = width * d;
  const auto sv = sequence.data();
  std::vector<double> out(rows * windows);
  // Row r = (offset, feature) = offset*d + feature; column j = window start.
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < windows; ++j) out[r * windows + j] = sv[j * d + r];
  return make_result(OpKind::kUnfold, {rows, windows}, std::move(out), {sequence.node()},
                     [rows, windows, d](Node& self) {
                       auto& g = self.inputs[0]->ensure_grad();
                       for (std::size_t r = 0; r < rows; ++r)
                         for (std::size_t j = 0; j < windows; ++j) g[j * d + r] += self.grad[r * windows + j];
                     });
}

Tensor add_column_bias(const Tensor& a, const Tensor& bias) {
  require_rank(a, 2, "add_column_bias");
  require_rank(bias, 1, "add_column_bias");
  const std::size_t m = a.dim(0), t = a.dim(1);
  if (bias.dim(0) != m) {
    throw DimensionError("add_column_bias: bias " + shape_to_string(bias.shape()) + " does not match " +
                         shape_to_string(a.shape()));
  }
  std::vector<double> out(a.data().begin(), a.data().end());
  const auto bv = bias.data();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < t; ++j) out[i * t + j] += bv[i];
  return make_result(OpKind::kAddColumnBias, a.shape(), std::move(out), {a.node(), bias.node()},
                     [m, t](Node& self) {
                       Node& na = *self.inputs[0];
                       Node& nb = *self.inputs[1];
                       if (na.requires_grad) {
                         auto& g = na.ensure_grad();
                         for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
                       }
                       if (nb.requires_grad) {
                         auto& g = nb.ensure_grad();
                         for (std::size_t i = 0; i < m; ++i)
                           for (std::size_t j = 0; j < t; ++j) g[i] += self.grad[i * t + j];
                       }
                     });
}

Tensor concat(std::span<const Tensor> parts) {
  if (parts.empty()) throw DimensionError("concat: no inputs");
  std::vector<double> out;
  std::vector<NodePtr> inputs;
  for (const Tensor& p : parts) {
    require_rank(p, 1, "concat");
    out.insert(out.end(), p.data().begin(), p.data().end());
    inputs.push_back(p.node());
  }
  const std::size_t total = out.size();
  return make_result(OpKind::kConcat, {total}, std::move(out), std::move(inputs), [](Node& self) {
    std::size_t offset = 0;
    for (const auto& in : self.inputs) {
      const std::size_t n = in->value.size();
      if (in->requires_grad) {
        auto& g = in->ensure_grad();
        for (std::size_t i = 0; i < n; ++i) g[i] += self.grad[offset + i];
      }
      offset += n;
    }
  });
}

Tensor slice(const Tensor& a, std::size_t offset, std::size_t length) {
  require_rank(a, 1, "slice");
  if (length == 0 || offset + length > a.size()) {
    throw DimensionError("slice: [" + std::to_string(offset) + ", " + std::to_string(offset + length) +
                         ") outside " + shape_to_string(a.shape()));
  }
  const auto av = a.data();
  std::vector<double> out(av.begin() + static_cast<std::ptrdiff_t>(offset),
                          av.begin() + static_cast<std::ptrdiff_t>(offset + length));
  return make_result(OpKind::kSlice, {length}, std::move(out), {a.node()}, [offset, length](Node& self) {
    auto& g = self.inputs[0]->ensure_grad();
    for (std::size_t i = 0; i < length; ++i) g[offset + i] += self.grad[i];
  });
}

Tensor stack_columns(std::span<const Tensor> columns) {
  if (columns.empty()) throw DimensionError("stack_columns: no inputs");
  const std::size_t k = columns[0].size();
  const std::size_t n = columns.size();
  std::vector<double> out(k * n);
  std::vector<NodePtr> inputs;
  for (std::size_t j = 0; j < n; ++j) {
    require_rank(columns[j], 1, "stack_columns");
    if (columns[j].size() != k) {
      throw DimensionError("stack_columns: column " + std::to_string(j) + " has shape " +
                           shape_to_string(columns[j].shape()) + ", expected [" + std::to_string(k) + "]");
    }
    const auto cv = columns[j].data();
    for (std::size_t i = 0; i < k; ++i) out[i * n + j] = cv[i];
    inputs.push_back(columns[j].node());
  }
  return make_result(OpKind::kStackColumns, {k, n}, std::move(out), std::move(inputs), [k, n](Node& self) {
    for (std::size_t j = 0; j < n; ++j) {
      Node& in = *self.inputs[j];
      if (!in.requires_grad) continue;
      auto& g = in.ensure_grad();
      for (std::size_t i = 0; i < k; ++i) g[i] += self.grad[i * n + j];
    }
  });
}

Tensor binary_cross_entropy(const Tensor& probs, std::span<const int> labels) {
  require_rank(probs, 1, "binary_cross_entropy");
  if (labels.size() != probs.size()) {
    throw DimensionError("binary_cross_entropy: " + std::to_string(probs.size()) + " probabilities vs " +
                         std::to_string(labels.size()) + " labels");
  }
  const auto pv = probs.data();
  const double n = static_cast<double>(pv.size());
  double total = 0.0;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    const double p = std::clamp(pv[i], kProbClamp, 1.0 - kProbClamp);
    total -= labels[i] == 1 ? std::log(p) : std::log1p(-p);
  }
  std::vector<int> kept(labels.begin(), labels.end());
  return make_result(OpKind::kBinaryCrossEntropy, {1}, {total / n}, {probs.node()},
                     [kept = std::move(kept), n](Node& self) {
                       Node& in = *self.inputs[0];
                       auto& g = in.ensure_grad();
                       for (std::size_t i = 0; i < g.size(); ++i) {
                         const double raw = in.value[i];
                         // Gradient is zero where the clamp is active.
                         if (raw < kProbClamp || raw > 1.0 - kProbClamp) continue;
                         const double d = kept[i] == 1 ? -1.0 / raw : 1.0 / (1.0 - raw);
                         g[i] += self.grad[0] * d / n;
                       }
                     });
}

}  // namespace hmn::ops
