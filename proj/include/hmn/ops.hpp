#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hmn/tensor.hpp"

// Differentiable primitives. Every op checks shapes, computes its output
// eagerly and, when any input requires grad, records how to push the output
// gradient back to its inputs.
namespace hmn::ops {

// [m x k] * [k x n] -> [m x n]
Tensor matmul(const Tensor& a, const Tensor& b);
// [m x k] * [k] -> [m]
Tensor matvec(const Tensor& w, const Tensor& x);
Tensor transpose(const Tensor& a);
Tensor reshape(const Tensor& a, Shape shape);

Tensor add(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor tanh(const Tensor& a);
Tensor sigmoid(const Tensor& a);

enum class Elementwise { kTanh, kSigmoid, kAdd, kMul };
// Dispatches to the unary (tanh, sigmoid) or binary (add, mul) kernels.
Tensor elementwise(Elementwise kind, std::span<const Tensor> inputs);

// Numerically stable softmax of a 1-D tensor.
Tensor softmax(const Tensor& z);

// Row-wise maximum of an [m x t] feature map; ties resolve to the first column.
Tensor max_over_time(const Tensor& feature_map);

// Scalar sum of all entries, shape [1].
Tensor sum(const Tensor& a);

// Rows of `table` selected by `ids`, shape [ids.size() x cols]. Row
// `frozen_row` (when >= 0) receives no gradient.
Tensor embedding(const Tensor& table, std::span<const int> ids, int frozen_row = -1);

// For an [n x d] sequence, column j of the result is rows j..j+width-1
// concatenated: shape [width*d x (n-width+1)].
Tensor unfold(const Tensor& sequence, std::size_t width);

// [m x t] + per-row bias [m], broadcast over columns.
Tensor add_column_bias(const Tensor& a, const Tensor& bias);

// Concatenation of 1-D tensors.
Tensor concat(std::span<const Tensor> parts);
Tensor slice(const Tensor& a, std::size_t offset, std::size_t length);

// Equal-length 1-D tensors as the columns of a [k x n] matrix.
Tensor stack_columns(std::span<const Tensor> columns);

// Mean over entries of -[y ln p + (1-y) ln(1-p)], p clamped to
// [kProbClamp, 1 - kProbClamp]. Shape [1].
inline constexpr double kProbClamp = 1e-7;
Tensor binary_cross_entropy(const Tensor& probs, std::span<const int> labels);

}  // namespace hmn::ops
