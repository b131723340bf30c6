#include "hmn/tensor.hpp"

#include <algorithm>
#include <unordered_map>
#include <utility>

#include "hmn/error.hpp"

namespace hmn {

std::size_t shape_size(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string shape_to_string(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out += "x";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

const char* op_name(OpKind kind) {
  switch (kind) {
    case OpKind::kLeaf: return "leaf";
    case OpKind::kMatMul: return "matmul";
    case OpKind::kMatVec: return "matvec";
    case OpKind::kTranspose: return "transpose";
    case OpKind::kReshape: return "reshape";
    case OpKind::kAdd: return "add";
    case OpKind::kMul: return "mul";
    case OpKind::kScale: return "scale";
    case OpKind::kTanh: return "tanh";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kSoftmax: return "softmax";
    case OpKind::kMaxOverTime: return "max_over_time";
    case OpKind::kSum: return "sum";
    case OpKind::kEmbedding: return "embedding";
    case OpKind::kUnfold: return "unfold";
    case OpKind::kAddColumnBias: return "add_column_bias";
    case OpKind::kConcat: return "concat";
    case OpKind::kSlice: return "slice";
    case OpKind::kStackColumns: return "stack_columns";
    case OpKind::kBinaryCrossEntropy: return "binary_cross_entropy";
  }
  return "unknown";
}

namespace {
thread_local bool g_grad_enabled = true;
}  // namespace

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }
bool grad_enabled() { return g_grad_enabled; }

Tensor Tensor::zeros(Shape shape, bool requires_grad) { return full(std::move(shape), 0.0, requires_grad); }

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  const std::size_t n = shape_size(shape);
  return from(std::move(shape), std::vector<double>(n, value), requires_grad);
}

Tensor Tensor::from(Shape shape, std::vector<double> values, bool requires_grad) {
  for (std::size_t d : shape) {
    if (d == 0) throw DimensionError("tensor dimensions must be positive, got " + shape_to_string(shape));
  }
  if (shape_size(shape) != values.size()) {
    throw DimensionError("shape " + shape_to_string(shape) + " does not hold " + std::to_string(values.size()) +
                         " values");
  }
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->value = std::move(values);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::vector(std::initializer_list<double> values, bool requires_grad) {
  return from({values.size()}, std::vector<double>(values), requires_grad);
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<double>> rows, bool requires_grad) {
  const std::size_t cols = rows.size() == 0 ? 0 : rows.begin()->size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (const auto& row : rows) {
    if (row.size() != cols) throw DimensionError("ragged matrix literal");
    values.insert(values.end(), row.begin(), row.end());
  }
  return from({rows.size(), cols}, std::move(values), requires_grad);
}

Tensor Tensor::from_node(std::shared_ptr<detail::Node> node) { return Tensor(std::move(node)); }

const Shape& Tensor::shape() const {
  if (!node_) throw UsageError("use of an undefined tensor");
  return node_->shape;
}

std::size_t Tensor::size() const { return shape_size(shape()); }

std::size_t Tensor::dim(std::size_t axis) const {
  const Shape& s = shape();
  if (axis >= s.size()) throw DimensionError("axis " + std::to_string(axis) + " out of range for " + shape_to_string(s));
  return s[axis];
}

std::span<const double> Tensor::data() const {
  shape();
  return node_->value;
}

std::span<double> Tensor::mutable_data() {
  shape();
  return node_->value;
}

double Tensor::item() const {
  if (size() != 1) throw UsageError("item() on tensor of shape " + shape_to_string(shape()));
  return node_->value[0];
}

bool Tensor::requires_grad() const { return node_ && node_->requires_grad; }

bool Tensor::has_grad() const { return node_ && !node_->grad.empty(); }

std::span<const double> Tensor::grad() const {
  shape();
  return node_->ensure_grad();
}

std::span<double> Tensor::mutable_grad() {
  shape();
  return node_->ensure_grad();
}

void Tensor::zero_grad() {
  shape();
  std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
}

OpKind Tensor::op() const {
  shape();
  return node_->op;
}

Tensor Tensor::clone() const {
  shape();
  auto node = std::make_shared<detail::Node>(*node_);
  return Tensor(std::move(node));
}

Tensor Tensor::detach() const { return from(shape(), node_->value, false); }

Graph Graph::trace(const Tensor& root) {
  Graph graph;
  if (!root.defined()) return graph;
  // Iterative post-order DFS; a node is emitted after all of its inputs.
  std::unordered_map<const detail::Node*, std::size_t> ids;
  std::vector<std::pair<detail::Node*, std::size_t>> stack;
  std::unordered_map<const detail::Node*, bool> on_stack;
  stack.emplace_back(root.node().get(), 0);
  on_stack[root.node().get()] = true;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs.size()) {
      detail::Node* child = node->inputs[next++].get();
      if (!ids.contains(child) && !on_stack[child]) {
        on_stack[child] = true;
        stack.emplace_back(child, 0);
      }
      continue;
    }
    GraphNode record{graph.order_.size(), node->op, {}};
    record.inputs.reserve(node->inputs.size());
    for (const auto& in : node->inputs) record.inputs.push_back(ids.at(in.get()));
    ids[node] = record.id;
    graph.nodes_.push_back(std::move(record));
    graph.order_.push_back(node);
    stack.pop_back();
  }
  return graph;
}

void backward(const Tensor& loss) {
  if (!loss.defined()) throw UsageError("backward on an undefined tensor");
  if (loss.size() != 1) {
    throw UsageError("backward requires a scalar loss, got shape " + shape_to_string(loss.shape()));
  }
  if (!loss.requires_grad()) throw UsageError("backward on a tensor that does not require grad");
  Graph graph = Graph::trace(loss);
  for (detail::Node* node : graph.order_) {
    if (node->requires_grad) node->ensure_grad();
  }
  loss.node()->grad[0] += 1.0;
  for (auto it = graph.order_.rbegin(); it != graph.order_.rend(); ++it) {
    detail::Node* node = *it;
    if (node->backward && node->requires_grad) node->backward(*node);
  }
}

}  // namespace hmn
