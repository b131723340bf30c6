#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hmn/document_encoder.hpp"
#include "hmn/tensor.hpp"

namespace hmn {

struct DecoderParams {
  LstmParams cell;       // input sent_dim, hidden doc_dim
  Tensor init_weight;    // [doc x doc], maps d_f to the initial decoder state
  Tensor init_bias;      // [doc]
  Tensor hidden_weight;  // [mlp x 2*doc]
  Tensor hidden_bias;    // [mlp]
  Tensor output_weight;  // [1 x mlp]
  Tensor output_bias;    // [1]

  void check() const;
};

struct DecoderOutput {
  Tensor probs;  // [n], probability that each sentence belongs in the summary

  std::vector<double> scores() const { return {probs.data().begin(), probs.data().end()}; }
};

/// Labels sentences left to right. The decoder state starts at
/// tanh(W d_f + b) and step t reads p_{t-1} * s_{t-1} (zero at t = 1). Each
/// score is sigmoid(MLP([decoder_t ; h_t])) with one tanh hidden layer.
///
/// With `teacher_labels` the previous gold label is fed as p_{t-1};
/// otherwise the previous predicted probability is, as a constant.
DecoderOutput decode(std::span<const Tensor> sentvecs, std::span<const Tensor> h, const Tensor& d_f,
                     const DecoderParams& params, std::optional<std::span<const int>> teacher_labels = std::nullopt);

}  // namespace hmn
