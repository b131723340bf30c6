#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hmn/checkpoint.hpp"
#include "hmn/decoder.hpp"
#include "hmn/document_encoder.hpp"
#include "hmn/sentence_encoder.hpp"

namespace hmn {

struct ModelConfig {
  std::size_t vocab_size = 30000;
  std::size_t word_dim = 150;
  std::size_t sent_dim = 300;
  std::size_t doc_dim = 750;
  std::vector<std::size_t> kernel_widths = {1, 2, 3, 4, 5, 6, 7};
  std::size_t hops = 2;
  std::size_t mlp_hidden = 256;
  EncoderMode encoder_mode = EncoderMode::kBlstm;
  bool use_memnet = true;
  double init_range = 0.05;

  // Throws UsageError when a dimension is zero or blstm gets an odd doc_dim.
  void validate() const;
};

using NamedTensor = std::pair<std::string, Tensor>;

/// Every learnable tensor of the summarizer.
struct ModelParams {
  SentEncoderParams sentence;
  RecurrentParams recurrent;
  MemNetParams memnet;
  DecoderParams decoder;

  // Stable, checkpoint-facing names in a fixed order. The tensors are
  // handles into this object.
  std::vector<NamedTensor> named() const;
  std::vector<Tensor> tensors() const;
  std::size_t parameter_count() const;
  void check() const;
};

// Builds zero-filled parameters with the shapes `config` implies.
ModelParams make_params(const ModelConfig& config);

// Every value i.i.d. U[-init_range, init_range] from a generator seeded with
// `seed`, then the PAD embedding row is zeroed.
ModelParams init_params(const ModelConfig& config, std::uint64_t seed);

ModelParams clone_params(const ModelParams& params);
void copy_values(const ModelParams& from, ModelParams& to);

struct DocumentForward {
  std::vector<Tensor> sentvecs;
  DocEncoding encoding;
  DecoderOutput decoded;
};

DocumentForward forward_document(const ModelParams& params, const ModelConfig& config,
                                 const std::vector<std::vector<int>>& sentences,
                                 std::optional<std::span<const int>> teacher_labels = std::nullopt);

// Mean per-sentence binary cross-entropy; probabilities clamped to
// [1e-7, 1 - 1e-7]. Throws TrainingError on a length mismatch.
Tensor sentence_loss(const Tensor& probs, std::span<const int> labels);

// Parameters in archive form and back. import_params checks every name and shape.
std::vector<ArchiveEntry> export_params(const ModelParams& params);
void import_params(const std::vector<ArchiveEntry>& entries, ModelParams& params);

}  // namespace hmn
