#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "hmn/checkpoint.hpp"
#include "hmn/error.hpp"
#include "hmn/evaluation.hpp"
#include "hmn/labels.hpp"
#include "hmn/text.hpp"
#include "hmn/training.hpp"

namespace hmn::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Everything needed to re-run a command: argv plus the configuration it
// resolved to after --config and flags were merged.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  json config = json::object();
  std::uint64_t seed = 0;
  std::map<std::string, std::string> inputs;
  std::string checkpoint;
  std::string started_at = utc_now();

  void write(const fs::path& out_dir) const {
    json j{{"command", command},   {"argv", argv},           {"config", config},
           {"seed", seed},         {"inputs", inputs},       {"checkpoint", checkpoint},
           {"version", kToolVersion}, {"started_at", started_at}, {"finished_at", utc_now()}};
    write_file_atomic(out_dir / "manifest.json", j.dump(2) + "\n");
  }
};

std::optional<fs::path> find_config_flag(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return fs::path(args[i + 1]);
    if (args[i].rfind("--config=", 0) == 0) return fs::path(args[i].substr(9));
  }
  return std::nullopt;
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void cap_sentences(Corpus& corpus, std::size_t max_sentences) {
  for (auto& doc : corpus.documents) {
    if (doc.raw_sentences.size() > max_sentences) doc.raw_sentences.resize(max_sentences);
    if (doc.labels && doc.labels->size() > max_sentences) doc.labels->resize(max_sentences);
  }
}

Vocabulary checked_vocab(const fs::path& path, const std::string& expected_hash) {
  Vocabulary vocab = Vocabulary::load(path);
  if (vocab.content_hash() != expected_hash) {
    throw CompatibilityError("vocabulary " + path.string() + " (hash " + vocab.content_hash() +
                             ") does not match the checkpoint (hash " + expected_hash + ")");
  }
  return vocab;
}

struct Shared {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out;
};

void add_shared(CLI::App* cmd, Shared& shared) {
  cmd->add_option("--config", shared.config_path, "JSON file of option defaults; flags override it");
  cmd->add_option("--seed", shared.seed, "Random seed")->capture_default_str();
  cmd->add_option("--out", shared.out, "Output directory")->required();
}

// ---- prep ----

struct PrepArgs {
  std::string input;
  std::string vocab;
  std::string split = "train";
  TextLimits limits;
};

void cmd_prep(const PrepArgs& a, const Shared& shared, RunManifest& manifest) {
  const fs::path out(shared.out);
  const Split split = a.split == "valid" ? Split::kValid : a.split == "test" ? Split::kTest : Split::kTrain;
  Corpus corpus = load_corpus(a.input, split);
  cap_sentences(corpus, a.limits.max_sentences);
  const Vocabulary vocab = a.vocab.empty() ? build_vocab(corpus, a.limits.max_vocab) : Vocabulary::load(a.vocab);

  std::size_t sentences = 0;
  std::size_t positives = 0;
  for (auto& doc : corpus.documents) {
    doc.labels = derive_labels(doc);
    sentences += doc.raw_sentences.size();
    for (int y : *doc.labels) positives += static_cast<std::size_t>(y);
  }
  ensure_dir(out);
  save_corpus(out / "corpus.jsonl", corpus);
  vocab.save(out / "vocab.txt");

  const double n = static_cast<double>(corpus.documents.size());
  std::printf("documents\t%zu\n", corpus.documents.size());
  std::printf("sentences\t%zu\n", sentences);
  std::printf("vocabulary\t%zu\n", vocab.size());
  std::printf("mean_positives_per_doc\t%.3f\n", static_cast<double>(positives) / n);
  std::printf("positive_fraction\t%.3f\n", static_cast<double>(positives) / static_cast<double>(sentences));

  manifest.config = {{"split", a.split},
                     {"max_vocab", a.limits.max_vocab},
                     {"max_sentences", a.limits.max_sentences},
                     {"max_sentence_tokens", a.limits.max_sentence_tokens},
                     {"vocab_hash", vocab.content_hash()}};
  manifest.inputs["input"] = a.input;
  if (!a.vocab.empty()) manifest.inputs["vocab"] = a.vocab;
}

// ---- train ----

struct TrainArgs {
  std::string train;
  std::string valid;
  std::string vocab;
  std::string encoder = "blstm";
  bool use_memnet = true;
  TrainConfig config;
};

void cmd_train(TrainArgs& a, const Shared& shared, RunManifest& manifest) {
  const fs::path out(shared.out);
  TrainConfig& config = a.config;
  config.seed = shared.seed;
  config.model.encoder_mode = parse_encoder_mode(a.encoder);
  config.model.use_memnet = a.use_memnet;

  const Vocabulary vocab = Vocabulary::load(a.vocab);
  config.model.vocab_size = vocab.size();
  config.validate();

  Corpus train_corpus = load_corpus(a.train, Split::kTrain);
  index_corpus(train_corpus, vocab, config.limits);
  std::optional<Corpus> valid_corpus;
  if (!a.valid.empty()) {
    valid_corpus = load_corpus(a.valid, Split::kValid);
    index_corpus(*valid_corpus, vocab, config.limits);
  }

  ensure_dir(out);
  TrainOptions options;
  options.validation = valid_corpus ? &*valid_corpus : nullptr;
  options.checkpoint_path = out / "model.ckpt";
  options.vocab_hash = vocab.content_hash();
  options.on_epoch = [](const EpochRecord& r) {
    std::printf("epoch %zu\ttrain_loss %.6f\tvalid_loss %.6f\t%.2fs\n", r.epoch, r.train_loss, r.valid_loss,
                r.seconds);
    std::fflush(stdout);
  };
  const TrainResult result = train(train_corpus, config, options);

  write_file_atomic(out / "config.json", config_to_json(config).dump(2) + "\n");
  write_file_atomic(out / "report.json", report_to_json(result.report).dump(2) + "\n");
  std::printf("best_epoch %zu\tbest_valid_loss %.6f\n", result.report.best_epoch, result.report.best_valid_loss);

  manifest.config = config_to_json(config);
  manifest.seed = config.seed;
  manifest.inputs["train"] = a.train;
  if (!a.valid.empty()) manifest.inputs["valid"] = a.valid;
  manifest.inputs["vocab"] = a.vocab;
  manifest.checkpoint = (out / "model.ckpt").string();
}

void add_train_flags(CLI::App* cmd, TrainArgs& a) {
  TrainConfig& c = a.config;
  cmd->add_option("--train", a.train, "Labeled training corpus")->required();
  cmd->add_option("--valid", a.valid, "Labeled validation corpus (defaults to the training corpus)");
  cmd->add_option("--vocab", a.vocab, "Vocabulary file written by prep")->required();
  cmd->add_option("--word-dim", c.model.word_dim)->capture_default_str();
  cmd->add_option("--sent-dim", c.model.sent_dim)->capture_default_str();
  cmd->add_option("--doc-dim", c.model.doc_dim)->capture_default_str();
  cmd->add_option("--kernel-widths", c.model.kernel_widths)->delimiter(',')->capture_default_str();
  cmd->add_option("--hops", c.model.hops)->capture_default_str();
  cmd->add_option("--mlp-hidden", c.model.mlp_hidden)->capture_default_str();
  cmd->add_option("--encoder", a.encoder, "Recurrent document encoder")
      ->check(CLI::IsMember({"lstm", "blstm"}))
      ->capture_default_str();
  cmd->add_flag("--memnet,!--no-memnet", a.use_memnet, "Fuse the memory-network document embedding");
  cmd->add_option("--init-range", c.model.init_range)->capture_default_str();
  cmd->add_option("--batch-size", c.batch_size)->capture_default_str();
  cmd->add_option("--learning-rate", c.learning_rate)->capture_default_str();
  cmd->add_option("--beta1", c.beta1)->capture_default_str();
  cmd->add_option("--beta2", c.beta2)->capture_default_str();
  cmd->add_option("--epsilon", c.epsilon)->capture_default_str();
  cmd->add_option("--max-epochs", c.max_epochs)->capture_default_str();
  cmd->add_option("--gradient-clip-norm", c.gradient_clip_norm)->capture_default_str();
  cmd->add_option("--patience", c.patience, "0 disables early stopping")->capture_default_str();
  cmd->add_option("--target-train-loss", c.target_train_loss, "0 disables")->capture_default_str();
  cmd->add_option("--max-sentence-tokens", c.limits.max_sentence_tokens)->capture_default_str();
  cmd->add_option("--max-sentences", c.limits.max_sentences)->capture_default_str();
  cmd->add_option("--max-vocab", c.limits.max_vocab)->capture_default_str();
}

// ---- summarize ----

struct SummarizeArgs {
  std::string checkpoint;
  std::string input;
  std::string vocab;
};

struct LoadedModel {
  Checkpoint checkpoint;
  Vocabulary vocab;
};

LoadedModel load_model(const std::string& checkpoint_path, const std::string& vocab_path) {
  Checkpoint ck = load_checkpoint(checkpoint_path);
  Vocabulary vocab = checked_vocab(vocab_path, ck.vocab_hash);
  return {std::move(ck), std::move(vocab)};
}

Summarizer model_summarizer(const LoadedModel& model) {
  return [&model](const Document& doc) {
    Document indexed = doc;
    index_document(indexed, model.vocab, model.checkpoint.config.limits);
    const std::vector<double> scores =
        predict_scores(model.checkpoint.params, model.checkpoint.config.model, indexed);
    return extract_summary(indexed, scores);
  };
}

void cmd_summarize(const SummarizeArgs& a, const Shared& shared, RunManifest& manifest) {
  const fs::path out(shared.out);
  const LoadedModel model = load_model(a.checkpoint, a.vocab);
  const Corpus corpus = load_corpus(a.input, Split::kTest);
  const Summarizer summarize = model_summarizer(model);
  std::string lines;
  for (const auto& doc : corpus.documents) {
    const Summary s = summarize(doc);
    lines += json{{"id", doc.id}, {"indices", s.indices}, {"text", s.text}, {"word_count", s.word_count}}.dump();
    lines += '\n';
  }
  ensure_dir(out);
  write_file_atomic(out / "summaries.jsonl", lines);
  std::printf("summaries\t%zu\n", corpus.documents.size());

  manifest.config = config_to_json(model.checkpoint.config);
  manifest.seed = model.checkpoint.config.seed;
  manifest.inputs["input"] = a.input;
  manifest.inputs["vocab"] = a.vocab;
  manifest.checkpoint = a.checkpoint;
}

// ---- evaluate ----

struct EvaluateArgs {
  std::string input;
  std::string system = "lead";
  std::string checkpoint;
  std::string vocab;
  std::string summaries;
  std::string name;
  std::string measure = "f1";
  bool stem = false;
  bool remove_stopwords = false;
};

std::map<std::string, Summary> read_summaries(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw EvaluationError("cannot open summaries file " + path.string());
  std::map<std::string, Summary> out;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      Summary s;
      s.text = j.at("text").get<std::string>();
      s.indices = j.value("indices", std::vector<std::size_t>{});
      s.word_count = word_count(s.text);
      out[j.at("id").get<std::string>()] = std::move(s);
    } catch (const json::exception& e) {
      throw ParseError(line_no, std::string("malformed summary record: ") + e.what());
    }
  }
  return out;
}

void cmd_evaluate(const EvaluateArgs& a, const Shared& shared, RunManifest& manifest) {
  const fs::path out(shared.out);
  const Measure measure = parse_measure(a.measure);
  const RougeOptions options{a.stem, a.remove_stopwords};
  const Corpus corpus = load_corpus(a.input, Split::kTest);

  std::optional<LoadedModel> model;
  std::map<std::string, Summary> given;
  Summarizer summarizer;
  std::string system = a.system;
  if (!a.summaries.empty()) {
    given = read_summaries(a.summaries);
    summarizer = [&given](const Document& doc) {
      auto it = given.find(doc.id);
      if (it == given.end()) throw EvaluationError("no summary for document '" + doc.id + "'");
      return it->second;
    };
    system = "summaries";
    manifest.inputs["summaries"] = a.summaries;
  } else if (a.system == "lead") {
    summarizer = lead_baseline;
    system = "LEAD";
  } else {
    if (a.checkpoint.empty() || a.vocab.empty()) {
      throw UsageError("--system model requires --checkpoint and --vocab");
    }
    model = load_model(a.checkpoint, a.vocab);
    summarizer = model_summarizer(*model);
    manifest.checkpoint = a.checkpoint;
    manifest.inputs["vocab"] = a.vocab;
    manifest.config["model"] = config_to_json(model->checkpoint.config);
  }
  if (!a.name.empty()) system = a.name;

  const EvaluationResult result = evaluate_corpus(corpus, summarizer, options);
  const TableRow rows[] = {{system, result.mean}};
  const std::string table = format_table(rows, options, measure);
  ensure_dir(out);
  write_file_atomic(out / "scores.tsv", table);
  write_file_atomic(out / "per_document.jsonl", format_per_document(result));
  std::fputs(table.c_str(), stdout);

  manifest.config["system"] = system;
  manifest.config["measure"] = a.measure;
  manifest.config["stem"] = a.stem;
  manifest.config["remove_stopwords"] = a.remove_stopwords;
  manifest.inputs["input"] = a.input;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Extractive summarizer: hybrid recurrent and memory-network document encoder"};
  app.name(args.empty() ? "hmn" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  // --config supplies defaults; it must be read before the flags are bound.
  json defaults = json::object();
  Shared shared;
  std::string error_prefix = "error: ";
  try {
    if (auto path = find_config_flag(args)) defaults = read_json_file(*path);
  } catch (const std::exception& e) {
    std::cerr << error_prefix << e.what() << "\n";
    return 1;
  }

  PrepArgs prep;
  TrainArgs train_args;
  SummarizeArgs summarize;
  EvaluateArgs evaluate;
  try {
    train_args.config = config_from_json(defaults);
    train_args.encoder = encoder_mode_name(train_args.config.model.encoder_mode);
    train_args.use_memnet = train_args.config.model.use_memnet;
    prep.limits = train_args.config.limits;
    shared.seed = train_args.config.seed;
    evaluate.stem = defaults.value("stem", false);
    evaluate.remove_stopwords = defaults.value("remove_stopwords", false);
    evaluate.measure = defaults.value("measure", std::string("f1"));
  } catch (const std::exception& e) {
    std::cerr << error_prefix << e.what() << "\n";
    return 1;
  }

  CLI::App* prep_cmd = app.add_subcommand("prep", "Derive labels and build the vocabulary");
  add_shared(prep_cmd, shared);
  prep_cmd->add_option("--input", prep.input, "Corpus file, one JSON record per line")->required();
  prep_cmd->add_option("--vocab", prep.vocab, "Reuse this vocabulary instead of building one");
  prep_cmd->add_option("--split", prep.split)->check(CLI::IsMember({"train", "valid", "test"}))->capture_default_str();
  prep_cmd->add_option("--max-vocab", prep.limits.max_vocab)->capture_default_str();
  prep_cmd->add_option("--max-sentences", prep.limits.max_sentences)->capture_default_str();
  prep_cmd->add_option("--max-sentence-tokens", prep.limits.max_sentence_tokens)->capture_default_str();

  CLI::App* train_cmd = app.add_subcommand("train", "Train a model and write the best checkpoint");
  add_shared(train_cmd, shared);
  add_train_flags(train_cmd, train_args);

  CLI::App* sum_cmd = app.add_subcommand("summarize", "Extract summaries with a trained model");
  add_shared(sum_cmd, shared);
  sum_cmd->add_option("--checkpoint", summarize.checkpoint)->required();
  sum_cmd->add_option("--input", summarize.input)->required();
  sum_cmd->add_option("--vocab", summarize.vocab)->required();

  CLI::App* eval_cmd = app.add_subcommand("evaluate", "Score summaries against highlights with ROUGE");
  add_shared(eval_cmd, shared);
  eval_cmd->add_option("--input", evaluate.input, "Corpus with highlights")->required();
  eval_cmd->add_option("--system", evaluate.system)->check(CLI::IsMember({"lead", "model"}))->capture_default_str();
  eval_cmd->add_option("--checkpoint", evaluate.checkpoint);
  eval_cmd->add_option("--vocab", evaluate.vocab);
  eval_cmd->add_option("--summaries", evaluate.summaries, "Score a summaries file instead of a system");
  eval_cmd->add_option("--name", evaluate.name, "Row label in the table");
  eval_cmd->add_option("--measure", evaluate.measure)
      ->check(CLI::IsMember({"f1", "recall", "precision"}))
      ->capture_default_str();
  eval_cmd->add_flag("--stem,!--no-stem", evaluate.stem, "Porter-stem tokens before scoring");
  eval_cmd->add_flag("--remove-stopwords,!--keep-stopwords", evaluate.remove_stopwords);

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  RunManifest manifest;
  manifest.argv = args;
  manifest.seed = shared.seed;
  try {
    if (*prep_cmd) {
      manifest.command = "prep";
      cmd_prep(prep, shared, manifest);
    } else if (*train_cmd) {
      manifest.command = "train";
      cmd_train(train_args, shared, manifest);
    } else if (*sum_cmd) {
      manifest.command = "summarize";
      cmd_summarize(summarize, shared, manifest);
    } else {
      manifest.command = "evaluate";
      cmd_evaluate(evaluate, shared, manifest);
    }
    if (!shared.config_path.empty()) manifest.inputs["config"] = shared.config_path;
    manifest.write(shared.out);
  } catch (const std::exception& e) {
    std::fflush(stdout);
    std::cerr << error_prefix << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace hmn::cli
