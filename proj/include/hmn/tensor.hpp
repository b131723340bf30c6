#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hmn {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_to_string(const Shape& shape);

enum class OpKind {
  kLeaf,
  kMatMul,
  kMatVec,
  kTranspose,
  kReshape,
  kAdd,
  kMul,
  kScale,
  kTanh,
  kSigmoid,
  kSoftmax,
  kMaxOverTime,
  kSum,
  kEmbedding,
  kUnfold,
  kAddColumnBias,
  kConcat,
  kSlice,
  kStackColumns,
  kBinaryCrossEntropy,
};

const char* op_name(OpKind kind);

namespace detail {

struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;  // empty until first written
  bool requires_grad = false;
  OpKind op = OpKind::kLeaf;
  std::vector<std::shared_ptr<Node>> inputs;
  // Reads this node's grad and accumulates into inputs' grads.
  std::function<void(Node&)> backward;

  std::vector<double>& ensure_grad() {
    if (grad.empty()) grad.assign(value.size(), 0.0);
    return grad;
  }
};

}  // namespace detail

/// Dense row-major array of doubles that records the operations producing it.
///
/// A Tensor is a handle: copies share storage and gradient, which is what lets
/// a parameter accumulate gradient from every place it is used. Use clone()
/// for an independent copy.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<double> values, bool requires_grad = false);
  static Tensor vector(std::initializer_list<double> values, bool requires_grad = false);
  static Tensor matrix(std::initializer_list<std::initializer_list<double>> rows,
                       bool requires_grad = false);

  // Internal: wraps an op result. Used by the ops translation unit.
  static Tensor from_node(std::shared_ptr<detail::Node> node);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const;
  std::size_t size() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t dim(std::size_t axis) const;

  std::span<const double> data() const;
  std::span<double> mutable_data();
  double item() const;
  double at(std::size_t i) const { return data()[i]; }

  bool requires_grad() const;
  bool has_grad() const;
  // Zeros when the tensor has not received any gradient yet.
  std::span<const double> grad() const;
  std::span<double> mutable_grad();
  void zero_grad();

  OpKind op() const;
  Tensor clone() const;
  // Same values, no history and no gradient tracking.
  Tensor detach() const;

  const std::shared_ptr<detail::Node>& node() const { return node_; }

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
  std::shared_ptr<detail::Node> node_;
};

// Disables graph recording on the current thread for its lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool grad_enabled();

/// Topologically ordered record of the operations that produced a tensor.
struct GraphNode {
  std::size_t id;
  OpKind op;
  std::vector<std::size_t> inputs;
};

class Graph {
 public:
  // Walks the history of `root`; node ids are positions in the returned order.
  static Graph trace(const Tensor& root);

  const std::vector<GraphNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  friend void backward(const Tensor& loss);
  std::vector<GraphNode> nodes_;
  std::vector<detail::Node*> order_;
};

/// Reverse-mode pass from a scalar. Gradients accumulate (+=) into every
/// reachable tensor that requires grad; nothing is reset here.
void backward(const Tensor& loss);

}  // namespace hmn
