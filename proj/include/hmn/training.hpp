#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hmn/model.hpp"
#include "hmn/text.hpp"

namespace hmn {

struct TrainConfig {
  ModelConfig model;
  std::size_t batch_size = 20;
  double learning_rate = 0.001;
  double beta1 = 0.99;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t max_epochs = 50;
  std::uint64_t seed = 1;
  double gradient_clip_norm = 5.0;
  // Epochs without validation improvement before stopping; 0 disables.
  std::size_t patience = 5;
  // Stop once the epoch's mean training loss falls below this; 0 disables.
  double target_train_loss = 0.0;
  TextLimits limits;

  void validate() const;
};

nlohmann::json config_to_json(const TrainConfig& config);
TrainConfig config_from_json(const nlohmann::json& j);

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double valid_loss = 0.0;
  double seconds = 0.0;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  double best_valid_loss = 0.0;
  std::string checkpoint_path;
};

nlohmann::json report_to_json(const TrainReport& report);

// Model weights plus everything needed to rebuild and validate them.
struct Checkpoint {
  TrainConfig config;
  std::string vocab_hash;
  ModelParams params;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

struct TrainOptions {
  // Scored after every epoch; the training corpus is used when empty.
  const Corpus* validation = nullptr;
  // Written whenever the validation loss improves.
  std::optional<std::filesystem::path> checkpoint_path;
  std::string vocab_hash;
  // Starting weights; init_params(config.model, config.seed) when unset.
  const ModelParams* initial = nullptr;
  std::function<void(const EpochRecord&)> on_epoch;
};

struct TrainResult {
  TrainReport report;
  ModelParams best;   // weights at the best validation loss
  ModelParams final;  // weights after the last epoch
};

// Mini-batch Adam on mean per-sentence cross-entropy with teacher forcing.
// Every document must be indexed and labeled.
TrainResult train(const Corpus& corpus, const TrainConfig& config, const TrainOptions& options = {});

// Mean over documents of the teacher-forced loss.
double corpus_loss(const ModelParams& params, const ModelConfig& config, const Corpus& corpus);

// Inference-mode sentence probabilities for an indexed document.
std::vector<double> predict_scores(const ModelParams& params, const ModelConfig& config, const Document& doc);

}  // namespace hmn
