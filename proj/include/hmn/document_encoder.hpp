#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hmn/tensor.hpp"

namespace hmn {

/// Gate pre-activations are stacked in the order input, forget, output,
/// candidate: rows [0,H) are the input gate, [H,2H) forget, [2H,3H) output,
/// [3H,4H) candidate.
struct LstmParams {
  Tensor w_input;   // [4H x input]
  Tensor w_hidden;  // [4H x H]
  Tensor bias;      // [4H]

  std::size_t hidden_dim() const { return w_hidden.dim(1); }
  std::size_t input_dim() const { return w_input.dim(1); }
  void check(const std::string& name) const;
};

struct LstmState {
  Tensor h;
  Tensor c;

  static LstmState zeros(std::size_t hidden);
};

// c' = f*c + i*g, h' = o*tanh(c') with sigmoid gates and tanh candidate.
LstmState lstm_cell(const Tensor& x, const LstmState& state, const LstmParams& params);

enum class EncoderMode { kLstm, kBlstm };

const char* encoder_mode_name(EncoderMode mode);
EncoderMode parse_encoder_mode(const std::string& name);

struct RecurrentParams {
  EncoderMode mode = EncoderMode::kBlstm;
  LstmParams forward;
  LstmParams backward;  // used only in kBlstm mode
};

struct RecurrentEncoding {
  std::vector<Tensor> h;  // per-sentence states
  Tensor d_prime;         // document embedding
};

// lstm: h_t is the hidden state, d_prime the final one. blstm: h_t is
// [forward_t ; backward_t] and d_prime is [forward_n ; backward_1].
RecurrentEncoding encode_recurrent(std::span<const Tensor> sentvecs, const RecurrentParams& params);

struct MemNetParams {
  Tensor query;                     // B: [doc x doc]
  std::vector<Tensor> input_maps;   // A^k: [doc x sent]
  std::vector<Tensor> output_maps;  // C^k: [doc x sent]

  std::size_t hops() const { return input_maps.size(); }
  void check() const;
};

struct MemNetEncoding {
  Tensor d_double_prime;           // o^K
  std::vector<Tensor> attention;   // p per hop
};

// u^1 = B d'; per hop p = softmax_i(u.A s_i), o = sum_i p_i C s_i,
// u^{k+1} = u^k + o^k. The result is the last hop's o.
MemNetEncoding memnet_encode(std::span<const Tensor> sentvecs, const Tensor& d_prime, const MemNetParams& params);

Tensor fuse(const Tensor& d_prime, const Tensor& d_double_prime);

struct DocEncoding {
  std::vector<Tensor> h;
  Tensor d_prime;
  Tensor d_double_prime;
  Tensor d_f;
  std::vector<Tensor> attention;
};

// Recurrent + memory-network encoding fused by elementwise sum. With
// `use_memnet` false the memory branch contributes a zero vector.
DocEncoding encode_document(std::span<const Tensor> sentvecs, const RecurrentParams& recurrent,
                            const MemNetParams& memnet, bool use_memnet = true);

}  // namespace hmn
