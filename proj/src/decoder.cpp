#include "hmn/decoder.hpp"

#include "hmn/error.hpp"
#include "hmn/ops.hpp"

namespace hmn {

void DecoderParams::check() const {
  cell.check("decoder");
  const std::size_t doc = cell.hidden_dim();
  if (init_weight.shape() != Shape{doc, doc} || init_bias.shape() != Shape{doc}) {
    throw DecoderError("decoder init transform has shape " + shape_to_string(init_weight.shape()) + ", expected " +
                       shape_to_string({doc, doc}));
  }
  const std::size_t mlp = hidden_bias.dim(0);
  if (hidden_weight.shape() != Shape{mlp, 2 * doc} || output_weight.shape() != Shape{1, mlp} ||
      output_bias.shape() != Shape{1}) {
    throw DecoderError("decoder MLP expects input of size " + std::to_string(2 * doc) + ", got layer of shape " +
                       shape_to_string(hidden_weight.shape()));
  }
}

DecoderOutput decode(std::span<const Tensor> sentvecs, std::span<const Tensor> h, const Tensor& d_f,
                     const DecoderParams& params, std::optional<std::span<const int>> teacher_labels) {
  const std::size_t n = sentvecs.size();
  if (n == 0) throw DecoderError("decode: document has no sentences");
  if (h.size() != n) {
    throw DecoderError("decode: " + std::to_string(n) + " sentence vectors but " + std::to_string(h.size()) +
                       " encoder states");
  }
  if (teacher_labels && teacher_labels->size() != n) {
    throw DecoderError("decode: " + std::to_string(teacher_labels->size()) + " teacher labels for " +
                       std::to_string(n) + " sentences");
  }
  const std::size_t doc = params.cell.hidden_dim();
  if (d_f.shape() != Shape{doc} || h[0].shape() != Shape{doc}) {
    throw DecoderError("decode: document embedding " + shape_to_string(d_f.shape()) + " / encoder state " +
                       shape_to_string(h[0].shape()) + " do not match decoder size " + std::to_string(doc));
  }

  LstmState state{ops::tanh(ops::add(ops::matvec(params.init_weight, d_f), params.init_bias)),
                  Tensor::zeros({doc})};
  std::vector<Tensor> step_probs;
  step_probs.reserve(n);
  double previous_p = 1.0;
  for (std::size_t t = 0; t < n; ++t) {
    const Tensor input = t == 0 ? Tensor::zeros({params.cell.input_dim()}) : ops::scale(sentvecs[t - 1], previous_p);
    state = lstm_cell(input, state, params.cell);
    const Tensor joined[] = {state.h, h[t]};
    const Tensor hidden =
        ops::tanh(ops::add(ops::matvec(params.hidden_weight, ops::concat(joined)), params.hidden_bias));
    const Tensor prob = ops::sigmoid(ops::add(ops::matvec(params.output_weight, hidden), params.output_bias));
    previous_p = teacher_labels ? static_cast<double>((*teacher_labels)[t]) : prob.item();
    step_probs.push_back(prob);
  }
  return {ops::concat(step_probs)};
}

}  // namespace hmn
