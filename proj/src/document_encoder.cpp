#include "hmn/document_encoder.hpp"

#include <algorithm>

#include "hmn/error.hpp"
#include "hmn/ops.hpp"

namespace hmn {

void LstmParams::check(const std::string& name) const {
  const std::size_t h = w_hidden.dim(0) / 4;
  if (w_hidden.rank() != 2 || w_hidden.dim(0) != 4 * h || w_hidden.dim(1) != h || w_input.rank() != 2 ||
      w_input.dim(0) != 4 * h || bias.shape() != Shape{4 * h}) {
    throw EncoderError("LSTM '" + name + "' has inconsistent gate shapes: input " +
                       shape_to_string(w_input.shape()) + ", hidden " + shape_to_string(w_hidden.shape()) +
                       ", bias " + shape_to_string(bias.shape()));
  }
}

LstmState LstmState::zeros(std::size_t hidden) {
  return {Tensor::zeros({hidden}), Tensor::zeros({hidden})};
}

LstmState lstm_cell(const Tensor& x, const LstmState& state, const LstmParams& params) {
  const std::size_t h = params.hidden_dim();
  if (x.shape() != Shape{params.input_dim()} || state.h.shape() != Shape{h} || state.c.shape() != Shape{h}) {
    throw EncoderError("lstm_cell: input " + shape_to_string(x.shape()) + " / state " +
                       shape_to_string(state.h.shape()) + " do not match cell with input " +
                       std::to_string(params.input_dim()) + " and hidden " + std::to_string(h));
  }
  const Tensor z = ops::add(ops::add(ops::matvec(params.w_input, x), ops::matvec(params.w_hidden, state.h)),
                            params.bias);
  const Tensor in_gate = ops::sigmoid(ops::slice(z, 0, h));
  const Tensor forget_gate = ops::sigmoid(ops::slice(z, h, h));
  const Tensor out_gate = ops::sigmoid(ops::slice(z, 2 * h, h));
  const Tensor candidate = ops::tanh(ops::slice(z, 3 * h, h));
  LstmState next;
  next.c = ops::add(ops::mul(forget_gate, state.c), ops::mul(in_gate, candidate));
  next.h = ops::mul(out_gate, ops::tanh(next.c));
  return next;
}

const char* encoder_mode_name(EncoderMode mode) { return mode == EncoderMode::kLstm ? "lstm" : "blstm"; }

EncoderMode parse_encoder_mode(const std::string& name) {
  if (name == "lstm") return EncoderMode::kLstm;
  if (name == "blstm") return EncoderMode::kBlstm;
  throw UsageError("unknown encoder mode '" + name + "' (expected lstm or blstm)");
}

RecurrentEncoding encode_recurrent(std::span<const Tensor> sentvecs, const RecurrentParams& params) {
  if (sentvecs.empty()) throw EncoderError("encode_recurrent: document has no sentence vectors");
  const std::size_t n = sentvecs.size();
  RecurrentEncoding out;
  std::vector<Tensor> forward;
  LstmState state = LstmState::zeros(params.forward.hidden_dim());
  for (const Tensor& s : sentvecs) {
    state = lstm_cell(s, state, params.forward);
    forward.push_back(state.h);
  }
  if (params.mode == EncoderMode::kLstm) {
    out.h = std::move(forward);
    out.d_prime = out.h.back();
    return out;
  }
  std::vector<Tensor> backward(n);
  state = LstmState::zeros(params.backward.hidden_dim());
  for (std::size_t t = n; t-- > 0;) {
    state = lstm_cell(sentvecs[t], state, params.backward);
    backward[t] = state.h;
  }
  for (std::size_t t = 0; t < n; ++t) {
    const Tensor parts[] = {forward[t], backward[t]};
    out.h.push_back(ops::concat(parts));
  }
  const Tensor ends[] = {forward.back(), backward.front()};
  out.d_prime = ops::concat(ends);
  return out;
}

void MemNetParams::check() const {
  if (input_maps.empty() || input_maps.size() != output_maps.size()) {
    throw EncoderError("memory network needs matching input/output maps for at least one hop");
  }
  const Shape& a = input_maps[0].shape();
  for (std::size_t k = 0; k < hops(); ++k) {
    if (input_maps[k].shape() != a || output_maps[k].shape() != a) {
      throw EncoderError("memory network hop " + std::to_string(k + 1) + " has mismatched map shapes");
    }
  }
  if (query.shape() != Shape{a[0], a[0]}) {
    throw EncoderError("memory network query transform has shape " + shape_to_string(query.shape()) + ", expected " +
                       shape_to_string({a[0], a[0]}));
  }
}

MemNetEncoding memnet_encode(std::span<const Tensor> sentvecs, const Tensor& d_prime, const MemNetParams& params) {
  if (sentvecs.empty()) throw EncoderError("memnet_encode: document has no sentence vectors");
  const Shape& a = params.input_maps.at(0).shape();
  if (d_prime.shape() != Shape{a[0]}) {
    throw EncoderError("memnet_encode: document embedding " + shape_to_string(d_prime.shape()) +
                       " does not match memory size " + std::to_string(a[0]));
  }
  for (const Tensor& s : sentvecs) {
    if (s.shape() != Shape{a[1]}) {
      throw EncoderError("memnet_encode: sentence vector " + shape_to_string(s.shape()) + " does not match " +
                         std::to_string(a[1]));
    }
  }
  const Tensor sentences = ops::stack_columns(sentvecs);  // [sent x n]
  MemNetEncoding out;
  Tensor u = ops::matvec(params.query, d_prime);
  Tensor o;
  for (std::size_t k = 0; k < params.hops(); ++k) {
    const Tensor memories = ops::matmul(params.input_maps[k], sentences);  // m_i as columns
    const Tensor outputs = ops::matmul(params.output_maps[k], sentences);  // c_i as columns
    const Tensor p = ops::softmax(ops::matvec(ops::transpose(memories), u));
    o = ops::matvec(outputs, p);
    out.attention.push_back(p);
    if (k + 1 < params.hops()) u = ops::add(u, o);
  }
  out.d_double_prime = o;
  return out;
}

Tensor fuse(const Tensor& d_prime, const Tensor& d_double_prime) {
  if (d_prime.shape() != d_double_prime.shape()) {
    throw EncoderError("fuse: " + shape_to_string(d_prime.shape()) + " vs " +
                       shape_to_string(d_double_prime.shape()));
  }
  return ops::add(d_prime, d_double_prime);
}

DocEncoding encode_document(std::span<const Tensor> sentvecs, const RecurrentParams& recurrent,
                            const MemNetParams& memnet, bool use_memnet) {
  RecurrentEncoding rec = encode_recurrent(sentvecs, recurrent);
  DocEncoding out;
  out.h = std::move(rec.h);
  out.d_prime = rec.d_prime;
  if (use_memnet) {
    MemNetEncoding mem = memnet_encode(sentvecs, out.d_prime, memnet);
    out.d_double_prime = mem.d_double_prime;
    out.attention = std::move(mem.attention);
  } else {
    out.d_double_prime = Tensor::zeros(out.d_prime.shape());
  }
  out.d_f = fuse(out.d_prime, out.d_double_prime);
  return out;
}

}  // namespace hmn
