#include "hmn/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "hmn/adam.hpp"
#include "hmn/error.hpp"
#include "hmn/ops.hpp"

namespace hmn {

using nlohmann::json;

void TrainConfig::validate() const {
  model.validate();
  if (batch_size == 0) throw UsageError("batch_size must be positive");
  if (max_epochs == 0) throw UsageError("max_epochs must be positive");
  if (!(beta1 > 0 && beta1 < 1) || !(beta2 > 0 && beta2 < 1)) throw UsageError("beta values must lie in (0, 1)");
  if (!(learning_rate >= 0)) throw UsageError("learning_rate must be non-negative");
  if (!(epsilon > 0)) throw UsageError("epsilon must be positive");
  if (!(gradient_clip_norm > 0)) throw UsageError("gradient_clip_norm must be positive");
  if (limits.max_sentences == 0 || limits.max_sentence_tokens == 0 || limits.max_vocab <= 2) {
    throw UsageError("text limits must be positive (max_vocab > 2)");
  }
}

json config_to_json(const TrainConfig& c) {
  return json{
      {"vocab_size", c.model.vocab_size},
      {"word_dim", c.model.word_dim},
      {"sent_dim", c.model.sent_dim},
      {"doc_dim", c.model.doc_dim},
      {"kernel_widths", c.model.kernel_widths},
      {"hops", c.model.hops},
      {"mlp_hidden", c.model.mlp_hidden},
      {"encoder_mode", encoder_mode_name(c.model.encoder_mode)},
      {"use_memnet", c.model.use_memnet},
      {"init_range", c.model.init_range},
      {"batch_size", c.batch_size},
      {"learning_rate", c.learning_rate},
      {"beta1", c.beta1},
      {"beta2", c.beta2},
      {"epsilon", c.epsilon},
      {"max_epochs", c.max_epochs},
      {"seed", c.seed},
      {"gradient_clip_norm", c.gradient_clip_norm},
      {"patience", c.patience},
      {"target_train_loss", c.target_train_loss},
      {"max_sentence_tokens", c.limits.max_sentence_tokens},
      {"max_sentences", c.limits.max_sentences},
      {"max_vocab", c.limits.max_vocab},
  };
}

TrainConfig config_from_json(const json& j) {
  TrainConfig c;
  auto get = [&j](const char* key, auto& slot) {
    if (auto it = j.find(key); it != j.end()) it->get_to(slot);
  };
  try {
    get("vocab_size", c.model.vocab_size);
    get("word_dim", c.model.word_dim);
    get("sent_dim", c.model.sent_dim);
    get("doc_dim", c.model.doc_dim);
    get("kernel_widths", c.model.kernel_widths);
    get("hops", c.model.hops);
    get("mlp_hidden", c.model.mlp_hidden);
    if (auto it = j.find("encoder_mode"); it != j.end()) {
      c.model.encoder_mode = parse_encoder_mode(it->get<std::string>());
    }
    get("use_memnet", c.model.use_memnet);
    get("init_range", c.model.init_range);
    get("batch_size", c.batch_size);
    get("learning_rate", c.learning_rate);
    get("beta1", c.beta1);
    get("beta2", c.beta2);
    get("epsilon", c.epsilon);
    get("max_epochs", c.max_epochs);
    get("seed", c.seed);
    get("gradient_clip_norm", c.gradient_clip_norm);
    get("patience", c.patience);
    get("target_train_loss", c.target_train_loss);
    get("max_sentence_tokens", c.limits.max_sentence_tokens);
    get("max_sentences", c.limits.max_sentences);
    get("max_vocab", c.limits.max_vocab);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed training config: ") + e.what());
  }
  return c;
}

json report_to_json(const TrainReport& report) {
  json epochs = json::array();
  for (const auto& e : report.epochs) {
    epochs.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"valid_loss", e.valid_loss},
                      {"seconds", e.seconds}});
  }
  return json{{"epochs", epochs},
              {"best_epoch", report.best_epoch},
              {"best_valid_loss", report.best_valid_loss},
              {"checkpoint_path", report.checkpoint_path}};
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  Archive archive;
  archive.metadata = json{{"config", config_to_json(checkpoint.config)}, {"vocab_hash", checkpoint.vocab_hash}}.dump();
  archive.entries = export_params(checkpoint.params);
  save_archive(path, archive);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const Archive archive = load_archive(path);
  json meta;
  try {
    meta = json::parse(archive.metadata);
  } catch (const json::exception& e) {
    throw CheckpointError("checkpoint metadata is not valid JSON: " + std::string(e.what()));
  }
  if (!meta.contains("config") || !meta.contains("vocab_hash")) {
    throw CheckpointError("checkpoint metadata lacks config or vocab_hash");
  }
  Checkpoint ck;
  ck.config = config_from_json(meta["config"]);
  ck.vocab_hash = meta["vocab_hash"].get<std::string>();
  ck.params = make_params(ck.config.model);
  import_params(archive.entries, ck.params);
  return ck;
}

namespace {

void require_trainable(const Document& doc) {
  if (!doc.labels) throw TrainingError("document '" + doc.id + "' has no labels; run prep first");
  if (doc.sentences.size() != doc.labels->size()) {
    throw TrainingError("document '" + doc.id + "' is not indexed against the vocabulary");
  }
}

double document_loss_value(const ModelParams& params, const ModelConfig& config, const Document& doc) {
  const std::vector<int>& labels = *doc.labels;
  DocumentForward fwd = forward_document(params, config, doc.sentences, std::span<const int>(labels));
  return sentence_loss(fwd.decoded.probs, labels).item();
}

}  // namespace

double corpus_loss(const ModelParams& params, const ModelConfig& config, const Corpus& corpus) {
  if (corpus.documents.empty()) throw TrainingError("cannot score an empty corpus");
  NoGradGuard no_grad;
  double total = 0.0;
  for (const auto& doc : corpus.documents) {
    require_trainable(doc);
    total += document_loss_value(params, config, doc);
  }
  return total / static_cast<double>(corpus.documents.size());
}

std::vector<double> predict_scores(const ModelParams& params, const ModelConfig& config, const Document& doc) {
  if (doc.sentences.size() != doc.raw_sentences.size()) {
    throw EncoderError("document '" + doc.id + "' is not indexed against the vocabulary");
  }
  NoGradGuard no_grad;
  return forward_document(params, config, doc.sentences).decoded.scores();
}

TrainResult train(const Corpus& corpus, const TrainConfig& config, const TrainOptions& options) {
  config.validate();
  if (corpus.documents.empty()) throw TrainingError("training corpus is empty");
  for (const auto& doc : corpus.documents) require_trainable(doc);
  const Corpus& validation = options.validation != nullptr ? *options.validation : corpus;
  for (const auto& doc : validation.documents) require_trainable(doc);

  const ModelConfig& mc = config.model;
  ModelParams params = options.initial != nullptr ? clone_params(*options.initial) : init_params(mc, config.seed);
  params.check();
  std::vector<Tensor> tensors = params.tensors();
  const AdamHyper hyper{config.learning_rate, config.beta1, config.beta2, config.epsilon};
  std::vector<AdamState> states;
  for (Tensor& t : tensors) {
    t.mutable_grad();
    t.zero_grad();
    states.push_back(AdamState::for_param(t, hyper));
  }

  TrainResult result;
  result.best = clone_params(params);
  if (options.checkpoint_path) result.report.checkpoint_path = options.checkpoint_path->string();
  double best = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  std::mt19937_64 shuffler(config.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::size_t> order(corpus.documents.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t pad_width = mc.word_dim;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    std::shuffle(order.begin(), order.end(), shuffler);
    double epoch_total = 0.0;
    for (std::size_t begin = 0, batch = 1; begin < order.size(); begin += config.batch_size, ++batch) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      const double weight = 1.0 / static_cast<double>(end - begin);
      double batch_total = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        const Document& doc = corpus.documents[order[i]];
        const std::vector<int>& labels = *doc.labels;
        DocumentForward fwd = forward_document(params, mc, doc.sentences, std::span<const int>(labels));
        const Tensor loss = sentence_loss(fwd.decoded.probs, labels);
        batch_total += loss.item();
        backward(ops::scale(loss, weight));
      }
      if (!std::isfinite(batch_total)) {
        throw TrainingError("non-finite loss in epoch " + std::to_string(epoch) + ", batch " + std::to_string(batch));
      }
      epoch_total += batch_total;
      clip_global_norm(tensors, config.gradient_clip_norm);
      // PAD embedding row stays fixed at zero.
      std::fill_n(params.sentence.embedding.mutable_grad().begin(), pad_width, 0.0);
      for (std::size_t k = 0; k < tensors.size(); ++k) {
        adam_step(tensors[k], states[k]);
        tensors[k].zero_grad();
      }
    }
    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = epoch_total / static_cast<double>(corpus.documents.size());
    record.valid_loss = corpus_loss(params, mc, validation);
    record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    result.report.epochs.push_back(record);
    if (options.on_epoch) options.on_epoch(record);

    if (record.valid_loss < best) {
      best = record.valid_loss;
      since_best = 0;
      result.report.best_epoch = epoch;
      result.report.best_valid_loss = best;
      copy_values(params, result.best);
      if (options.checkpoint_path) {
        save_checkpoint(*options.checkpoint_path, {config, options.vocab_hash, result.best});
      }
    } else {
      ++since_best;
    }
    if (config.patience > 0 && since_best >= config.patience) break;
    if (config.target_train_loss > 0 && record.train_loss < config.target_train_loss) break;
  }
  result.final = std::move(params);
  return result;
}

}  // namespace hmn
