#include "hmn/model.hpp"

#include <algorithm>
#include <random>

#include "hmn/error.hpp"
#include "hmn/ops.hpp"
#include "hmn/text.hpp"

namespace hmn {
namespace {

LstmParams make_lstm(std::size_t input, std::size_t hidden) {
  return {Tensor::zeros({4 * hidden, input}, true), Tensor::zeros({4 * hidden, hidden}, true),
          Tensor::zeros({4 * hidden}, true)};
}

void add_lstm(std::vector<NamedTensor>& out, const std::string& prefix, const LstmParams& p) {
  out.emplace_back(prefix + ".w_input", p.w_input);
  out.emplace_back(prefix + ".w_hidden", p.w_hidden);
  out.emplace_back(prefix + ".bias", p.bias);
}

}  // namespace

void ModelConfig::validate() const {
  if (vocab_size <= 2) throw UsageError("vocab_size must exceed the two reserved ids");
  if (word_dim == 0 || sent_dim == 0 || doc_dim == 0 || mlp_hidden == 0 || hops == 0) {
    throw UsageError("model dimensions and hop count must be positive");
  }
  if (kernel_widths.empty() || std::find(kernel_widths.begin(), kernel_widths.end(), 0u) != kernel_widths.end()) {
    throw UsageError("kernel widths must be a non-empty list of positive integers");
  }
  if (encoder_mode == EncoderMode::kBlstm && doc_dim % 2 != 0) {
    throw UsageError("blstm encoder splits doc_dim across two directions; doc_dim must be even");
  }
  if (!(init_range > 0)) throw UsageError("init_range must be positive");
}

std::vector<NamedTensor> ModelParams::named() const {
  std::vector<NamedTensor> out;
  out.emplace_back("sentence.embedding", sentence.embedding);
  for (std::size_t i = 0; i < sentence.widths.size(); ++i) {
    const std::string w = std::to_string(sentence.widths[i]);
    out.emplace_back("sentence.filter" + w, sentence.filters[i]);
    out.emplace_back("sentence.bias" + w, sentence.biases[i]);
  }
  add_lstm(out, "encoder.forward", recurrent.forward);
  if (recurrent.mode == EncoderMode::kBlstm) add_lstm(out, "encoder.backward", recurrent.backward);
  out.emplace_back("memnet.query", memnet.query);
  for (std::size_t k = 0; k < memnet.hops(); ++k) {
    const std::string hop = std::to_string(k + 1);
    out.emplace_back("memnet.input" + hop, memnet.input_maps[k]);
    out.emplace_back("memnet.output" + hop, memnet.output_maps[k]);
  }
  add_lstm(out, "decoder.cell", decoder.cell);
  out.emplace_back("decoder.init_weight", decoder.init_weight);
  out.emplace_back("decoder.init_bias", decoder.init_bias);
  out.emplace_back("decoder.hidden_weight", decoder.hidden_weight);
  out.emplace_back("decoder.hidden_bias", decoder.hidden_bias);
  out.emplace_back("decoder.output_weight", decoder.output_weight);
  out.emplace_back("decoder.output_bias", decoder.output_bias);
  return out;
}

std::vector<Tensor> ModelParams::tensors() const {
  std::vector<Tensor> out;
  for (auto& [name, t] : named()) out.push_back(t);
  return out;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [name, t] : named()) n += t.size();
  return n;
}

void ModelParams::check() const {
  sentence.check();
  recurrent.forward.check("encoder.forward");
  if (recurrent.mode == EncoderMode::kBlstm) recurrent.backward.check("encoder.backward");
  memnet.check();
  decoder.check();
}

ModelParams make_params(const ModelConfig& config) {
  config.validate();
  ModelParams p;
  p.sentence.embedding = Tensor::zeros({config.vocab_size, config.word_dim}, true);
  p.sentence.widths = config.kernel_widths;
  for (std::size_t w : config.kernel_widths) {
    p.sentence.filters.push_back(Tensor::zeros({config.sent_dim, w * config.word_dim}, true));
    p.sentence.biases.push_back(Tensor::zeros({config.sent_dim}, true));
  }
  p.recurrent.mode = config.encoder_mode;
  const std::size_t hidden = config.encoder_mode == EncoderMode::kBlstm ? config.doc_dim / 2 : config.doc_dim;
  p.recurrent.forward = make_lstm(config.sent_dim, hidden);
  if (config.encoder_mode == EncoderMode::kBlstm) p.recurrent.backward = make_lstm(config.sent_dim, hidden);
  p.memnet.query = Tensor::zeros({config.doc_dim, config.doc_dim}, true);
  for (std::size_t k = 0; k < config.hops; ++k) {
    p.memnet.input_maps.push_back(Tensor::zeros({config.doc_dim, config.sent_dim}, true));
    p.memnet.output_maps.push_back(Tensor::zeros({config.doc_dim, config.sent_dim}, true));
  }
  p.decoder.cell = make_lstm(config.sent_dim, config.doc_dim);
  p.decoder.init_weight = Tensor::zeros({config.doc_dim, config.doc_dim}, true);
  p.decoder.init_bias = Tensor::zeros({config.doc_dim}, true);
  p.decoder.hidden_weight = Tensor::zeros({config.mlp_hidden, 2 * config.doc_dim}, true);
  p.decoder.hidden_bias = Tensor::zeros({config.mlp_hidden}, true);
  p.decoder.output_weight = Tensor::zeros({1, config.mlp_hidden}, true);
  p.decoder.output_bias = Tensor::zeros({1}, true);
  return p;
}

ModelParams init_params(const ModelConfig& config, std::uint64_t seed) {
  ModelParams p = make_params(config);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-config.init_range, config.init_range);
  for (auto& [name, t] : p.named()) {
    Tensor handle = t;
    for (double& v : handle.mutable_data()) v = dist(rng);
  }
  auto table = p.sentence.embedding.mutable_data();
  std::fill_n(table.begin(), config.word_dim, 0.0);
  return p;
}

ModelParams clone_params(const ModelParams& params) {
  ModelParams out = params;
  // Rebind every handle in `out` to a deep copy.
  out.sentence.embedding = params.sentence.embedding.clone();
  for (auto& f : out.sentence.filters) f = f.clone();
  for (auto& b : out.sentence.biases) b = b.clone();
  for (LstmParams* l : {&out.recurrent.forward, &out.recurrent.backward, &out.decoder.cell}) {
    if (!l->w_input.defined()) continue;
    l->w_input = l->w_input.clone();
    l->w_hidden = l->w_hidden.clone();
    l->bias = l->bias.clone();
  }
  out.memnet.query = out.memnet.query.clone();
  for (auto& a : out.memnet.input_maps) a = a.clone();
  for (auto& c : out.memnet.output_maps) c = c.clone();
  for (Tensor* t : {&out.decoder.init_weight, &out.decoder.init_bias, &out.decoder.hidden_weight,
                    &out.decoder.hidden_bias, &out.decoder.output_weight, &out.decoder.output_bias}) {
    *t = t->clone();
  }
  return out;
}

void copy_values(const ModelParams& from, ModelParams& to) {
  auto src = from.named();
  auto dst = to.named();
  if (src.size() != dst.size()) throw UsageError("copy_values: parameter sets differ");
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i].first != dst[i].first || src[i].second.shape() != dst[i].second.shape()) {
      throw UsageError("copy_values: parameter '" + src[i].first + "' differs");
    }
    auto out = dst[i].second.mutable_data();
    std::copy(src[i].second.data().begin(), src[i].second.data().end(), out.begin());
  }
}

DocumentForward forward_document(const ModelParams& params, const ModelConfig& config,
                                 const std::vector<std::vector<int>>& sentences,
                                 std::optional<std::span<const int>> teacher_labels) {
  if (sentences.empty()) throw EncoderError("document has no sentences");
  DocumentForward out;
  out.sentvecs.reserve(sentences.size());
  for (const auto& s : sentences) out.sentvecs.push_back(encode_sentence(s, params.sentence));
  out.encoding = encode_document(out.sentvecs, params.recurrent, params.memnet, config.use_memnet);
  out.decoded = decode(out.sentvecs, out.encoding.h, out.encoding.d_f, params.decoder, teacher_labels);
  return out;
}

Tensor sentence_loss(const Tensor& probs, std::span<const int> labels) {
  if (probs.rank() != 1 || probs.size() != labels.size()) {
    throw TrainingError("loss: " + std::to_string(probs.size()) + " scores for " + std::to_string(labels.size()) +
                        " labels");
  }
  return ops::binary_cross_entropy(probs, labels);
}

std::vector<ArchiveEntry> export_params(const ModelParams& params) {
  std::vector<ArchiveEntry> entries;
  for (const auto& [name, t] : params.named()) {
    entries.push_back({name, t.shape(), std::vector<double>(t.data().begin(), t.data().end())});
  }
  return entries;
}

void import_params(const std::vector<ArchiveEntry>& entries, ModelParams& params) {
  auto named = params.named();
  if (entries.size() != named.size()) {
    throw CheckpointError("checkpoint holds " + std::to_string(entries.size()) + " tensors, model expects " +
                          std::to_string(named.size()));
  }
  for (auto& [name, t] : named) {
    const ArchiveEntry* match = nullptr;
    for (const auto& e : entries) {
      if (e.name == name) match = &e;
    }
    if (match == nullptr) throw CheckpointError("checkpoint is missing parameter '" + name + "'");
    if (match->shape != t.shape()) {
      throw CheckpointError("parameter '" + name + "' has shape " + shape_to_string(match->shape) +
                            " in the checkpoint, model expects " + shape_to_string(t.shape()));
    }
    Tensor handle = t;
    std::copy(match->values.begin(), match->values.end(), handle.mutable_data().begin());
  }
}

}  // namespace hmn
