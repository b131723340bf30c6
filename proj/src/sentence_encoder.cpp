#include "hmn/sentence_encoder.hpp"

#include <algorithm>

#include "hmn/error.hpp"
#include "hmn/ops.hpp"
#include "hmn/text.hpp"

namespace hmn {

std::size_t SentEncoderParams::max_width() const {
  return widths.empty() ? 0 : *std::max_element(widths.begin(), widths.end());
}

void SentEncoderParams::check() const {
  if (widths.empty()) throw EncoderError("sentence encoder has no filter banks");
  if (filters.size() != widths.size() || biases.size() != widths.size()) {
    throw EncoderError("sentence encoder needs one filter and one bias per width");
  }
  const std::size_t m = output_dim();
  for (std::size_t i = 0; i < widths.size(); ++i) {
    const Shape want = {m, widths[i] * word_dim()};
    if (filters[i].shape() != want || biases[i].shape() != Shape{m}) {
      throw EncoderError("filter bank of width " + std::to_string(widths[i]) + " has shape " +
                         shape_to_string(filters[i].shape()) + ", expected " + shape_to_string(want));
    }
  }
}

std::vector<int> pad_tokens(std::span<const int> tokens, std::size_t min_length) {
  std::vector<int> out(tokens.begin(), tokens.end());
  if (out.size() < min_length) out.resize(min_length, Vocabulary::kPad);
  return out;
}

Tensor encode_sentence(std::span<const int> tokens, const SentEncoderParams& params) {
  if (tokens.empty()) throw EncoderError("cannot encode an empty sentence");
  const std::vector<int> padded = pad_tokens(tokens, params.max_width());
  const Tensor words = ops::embedding(params.embedding, padded, Vocabulary::kPad);
  Tensor total;
  for (std::size_t i = 0; i < params.widths.size(); ++i) {
    const Tensor windows = ops::unfold(words, params.widths[i]);
    const Tensor features = ops::tanh(ops::add_column_bias(ops::matmul(params.filters[i], windows), params.biases[i]));
    const Tensor pooled = ops::max_over_time(features);
    total = total.defined() ? ops::add(total, pooled) : pooled;
  }
  return total;
}

}  // namespace hmn
