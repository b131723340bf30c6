#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hmn/tensor.hpp"

namespace hmn {

/// Word embeddings plus one convolutional filter bank per window width.
/// Bank c maps a window of c concatenated word vectors to `output_dim()`
/// features; every bank has the same output size because the pooled
/// vectors are summed.
struct SentEncoderParams {
  Tensor embedding;                  // [vocab x word_dim], row 0 is PAD
  std::vector<std::size_t> widths;   // e.g. {1,...,7}
  std::vector<Tensor> filters;       // filters[i]: [sent_dim x widths[i]*word_dim]
  std::vector<Tensor> biases;        // biases[i]: [sent_dim]

  std::size_t word_dim() const { return embedding.dim(1); }
  std::size_t output_dim() const { return biases.at(0).dim(0); }
  std::size_t max_width() const;
  void check() const;
};

// Right-pads with PAD to max(min_length, tokens.size()).
std::vector<int> pad_tokens(std::span<const int> tokens, std::size_t min_length);

// For each width: tanh(filter * window + bias) over all windows, max over
// time, then the per-width vectors are summed. Throws EncoderError on an
// empty sentence.
Tensor encode_sentence(std::span<const int> tokens, const SentEncoderParams& params);

}  // namespace hmn
