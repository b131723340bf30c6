// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Each criterion also fails if it exceeds its wall-clock budget.

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "hmn/decoder.hpp"
#include "hmn/document_encoder.hpp"
#include "hmn/labels.hpp"
#include "hmn/model.hpp"
#include "hmn/ops.hpp"
#include "hmn/rouge.hpp"
#include "hmn/sentence_encoder.hpp"
#include "hmn/text.hpp"
#include "hmn/training.hpp"
#include "testkit.hpp"

namespace fs = std::filesystem;
using namespace hmn;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // 0 means no runtime bound
  std::function<Outcome()> run;
};

std::string fmt(const char* format, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the CLI with its stdout and stderr sent to /dev/null.
int quiet_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hmn");
  std::fflush(stdout);
  std::fflush(stderr);
  const int saved_out = dup(1), saved_err = dup(2);
  const int null = open("/dev/null", O_WRONLY);
  dup2(null, 1);
  dup2(null, 2);
  close(null);
  const int code = cli::run(args);
  std::fflush(stdout);
  std::fflush(stderr);
  dup2(saved_out, 1);
  dup2(saved_err, 2);
  close(saved_out);
  close(saved_err);
  return code;
}

Tensor random_tensor(std::mt19937_64& rng, Shape shape, bool grad = true) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(shape_size(shape));
  for (double& x : v) x = u(rng);
  return Tensor::from(std::move(shape), std::move(v), grad);
}

Tensor probe(const Tensor& t, const Tensor& weights) { return ops::sum(ops::mul(t, weights)); }

std::vector<Tensor> all_params(const ModelParams& p) {
  std::vector<Tensor> out;
  for (const auto& [name, t] : p.named()) out.push_back(t);
  return out;
}

std::vector<int> long_tokens(std::mt19937_64& rng, std::size_t vocab, std::size_t len) {
  std::uniform_int_distribution<int> id(1, static_cast<int>(vocab) - 1);
  std::vector<int> out(len);
  for (int& t : out) t = id(rng);
  return out;
}

Corpus labeled_planted(std::uint64_t seed, std::size_t documents) {
  Corpus c = testkit::planted_corpus(seed, documents).corpus;
  for (auto& d : c.documents) d.labels = derive_labels(d);
  return c;
}

// Dimensions used by the overfit and architecture criteria.
TrainConfig reduced_config(std::size_t vocab, std::uint64_t seed) {
  TrainConfig t;
  t.model.vocab_size = vocab;
  t.model.word_dim = 32;
  t.model.sent_dim = 64;
  t.model.doc_dim = 128;
  t.max_epochs = 500;
  t.patience = 0;
  t.target_train_loss = 0.05;
  t.seed = seed;
  return t;
}

// ---- 1 ----

Outcome gradient_suite() {
  const double tol = testkit::FiniteDiffConfig{}.tolerance;
  double worst = 0.0;
  std::string worst_case;
  std::size_t checks = 0;
  auto check = [&](const std::string& name, const std::function<Tensor()>& loss, std::vector<Tensor> wrt) {
    double e = testkit::max_gradient_error(loss, std::move(wrt));
    if (!std::isfinite(e)) e = INFINITY;
    ++checks;
    if (worst_case.empty() || e > worst) {
      worst = e;
      worst_case = name;
    }
  };

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    Tensor a = random_tensor(rng, {3, 4}), b = random_tensor(rng, {4, 2});
    Tensor v = random_tensor(rng, {4}), u = random_tensor(rng, {4});
    Tensor seq = random_tensor(rng, {5, 3}), col_bias = random_tensor(rng, {9}), table = random_tensor(rng, {6, 3});
    const std::vector<int> ids = {2, 0, 5, 2};
    auto w = [&](Shape s) { return random_tensor(rng, std::move(s), false); };
    const Tensor w32 = w({3, 2}), w3 = w({3}), w12 = w({12}), w34 = w({3, 4}), w4 = w({4}), w43 = w({4, 3}),
                 w8 = w({8}), w93 = w({9, 3}), w2 = w({2}), w42 = w({4, 2});
    const Tensor uv[] = {u, v};
    const Tensor only_a[] = {a};
    const std::vector<int> labels = {1, 0, 0, 1};

    check("matmul", [&] { return probe(ops::matmul(a, b), w32); }, {a, b});
    check("matvec", [&] { return probe(ops::matvec(a, v), w3); }, {a, v});
    check("transpose", [&] { return probe(ops::transpose(a), w43); }, {a});
    check("reshape", [&] { return probe(ops::reshape(a, {12}), w12); }, {a});
    check("add", [&] { return probe(ops::add(v, u), w4); }, {v, u});
    check("mul", [&] { return probe(ops::mul(v, u), w4); }, {v, u});
    check("scale", [&] { return probe(ops::scale(v, -1.7), w4); }, {v});
    check("tanh", [&] { return probe(ops::tanh(a), w34); }, {a});
    check("sigmoid", [&] { return probe(ops::sigmoid(a), w34); }, {a});
    check("elementwise", [&] { return probe(ops::elementwise(ops::Elementwise::kTanh, only_a), w34); }, {a});
    check("elementwise2", [&] { return probe(ops::elementwise(ops::Elementwise::kMul, uv), w4); }, {u, v});
    check("softmax", [&] { return probe(ops::softmax(ops::scale(v, 3.0)), w4); }, {v});
    check("max_over_time", [&] { return probe(ops::max_over_time(a), w3); }, {a});
    check("sum", [&] { return ops::sum(ops::scale(a, 2.5)); }, {a});
    check("embedding", [&] { return probe(ops::embedding(table, ids), w43); }, {table});
    check("unfold", [&] { return probe(ops::add_column_bias(ops::unfold(seq, 3), col_bias), w93); }, {seq, col_bias});
    check("concat", [&] { return probe(ops::concat(uv), w8); }, {u, v});
    check("slice", [&] { return probe(ops::slice(v, 1, 2), w2); }, {v});
    check("stack_columns", [&] { return probe(ops::stack_columns(uv), w42); }, {u, v});
    check("binary_cross_entropy", [&] { return ops::binary_cross_entropy(ops::sigmoid(v), labels); }, {v});

    // Composites share the toy dimensions word=4, sent=6, doc=8. Sentences
    // are at least as long as the widest filter so no frozen PAD row enters.
    const ModelConfig c = testkit::toy_config(12, 4, 6, 8);
    ModelParams p = init_params(c, seed);

    const std::vector<int> tokens = long_tokens(rng, c.vocab_size, 7 + seed % 3);
    const Tensor w6 = w({6});
    std::vector<Tensor> sent_wrt = {p.sentence.embedding};
    sent_wrt.insert(sent_wrt.end(), p.sentence.filters.begin(), p.sentence.filters.end());
    sent_wrt.insert(sent_wrt.end(), p.sentence.biases.begin(), p.sentence.biases.end());
    check("sentence_encoder", [&] { return probe(ops::tanh(encode_sentence(tokens, p.sentence)), w6); }, sent_wrt);

    std::vector<Tensor> s = {random_tensor(rng, {6}), random_tensor(rng, {6})};
    const Tensor w_state = w({8 * 3});
    check(
        "blstm_step",
        [&] {
          const RecurrentEncoding r = encode_recurrent(s, p.recurrent);
          const Tensor parts[] = {r.h[0], r.h[1], r.d_prime};
          return probe(ops::tanh(ops::concat(parts)), w_state);
        },
        {s[0], s[1], p.recurrent.forward.w_input, p.recurrent.forward.w_hidden, p.recurrent.forward.bias,
         p.recurrent.backward.w_input, p.recurrent.backward.w_hidden, p.recurrent.backward.bias});

    Tensor d_prime = random_tensor(rng, {8});
    const Tensor w_doc = w({8});
    std::vector<Tensor> mem_wrt = {s[0], s[1], d_prime, p.memnet.query};
    mem_wrt.insert(mem_wrt.end(), p.memnet.input_maps.begin(), p.memnet.input_maps.end());
    mem_wrt.insert(mem_wrt.end(), p.memnet.output_maps.begin(), p.memnet.output_maps.end());
    check("memnet_2hop", [&] { return probe(memnet_encode(s, d_prime, p.memnet).d_double_prime, w_doc); }, mem_wrt);

    std::vector<Tensor> h = {random_tensor(rng, {8}), random_tensor(rng, {8})};
    Tensor d_f = random_tensor(rng, {8});
    const std::vector<int> two_labels = {static_cast<int>(seed % 2), 1};
    check(
        "decoder_2step",
        [&] {
          return sentence_loss(decode(s, h, d_f, p.decoder, std::span<const int>(two_labels)).probs, two_labels);
        },
        {s[0], s[1], h[0], h[1], d_f, p.decoder.cell.w_input, p.decoder.cell.w_hidden, p.decoder.cell.bias,
         p.decoder.init_weight, p.decoder.init_bias, p.decoder.hidden_weight, p.decoder.hidden_bias,
         p.decoder.output_weight, p.decoder.output_bias});

    const std::vector<std::vector<int>> doc = {long_tokens(rng, c.vocab_size, 7), long_tokens(rng, c.vocab_size, 8)};
    check(
        "full_loss",
        [&] {
          return sentence_loss(forward_document(p, c, doc, std::span<const int>(two_labels)).decoded.probs,
                               two_labels);
        },
        all_params(p));
  }
  const bool ok = worst < tol;
  return {ok, std::to_string(checks) + " checks over 20 seeds, max relative error " + fmt("%.2e", worst) + " (" +
                  worst_case + ")"};
}

// ---- 2 ----

Outcome oracle_equivalence() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> small(2, 5), half(1, 4), count(1, 5), len(1, 9), vocab(8, 20);
  double worst = 0.0;
  std::string worst_fragment;
  std::size_t instances = 0;
  for (const std::string& fragment : testkit::kFragments) {
    for (int trial = 0; trial < 100; ++trial) {
      const EncoderMode mode = trial % 2 ? EncoderMode::kLstm : EncoderMode::kBlstm;
      ModelConfig c = testkit::toy_config(vocab(rng), small(rng), small(rng), 2 * half(rng), mode);
      c.hops = 1 + trial % 3;
      c.use_memnet = fragment == "memnet" || trial % 5 != 0;
      const ModelParams p = init_params(c, rng());
      const auto sentences = testkit::random_sentences(rng, c.vocab_size, count(rng), len(rng));
      std::vector<int> labels(sentences.size());
      for (int& l : labels) l = static_cast<int>(rng() % 2);
      const testkit::Vec expected = testkit::scalar_forward(fragment, p, c, sentences, &labels);
      const testkit::Vec got = testkit::library_forward(fragment, p, c, sentences, &labels);
      if (expected.size() != got.size()) return {false, fragment + ": output sizes differ"};
      for (std::size_t i = 0; i < got.size(); ++i) {
        double d = std::abs(expected[i] - got[i]);
        if (!std::isfinite(d)) d = INFINITY;
        if (worst_fragment.empty() || d > worst) {
          worst = d;
          worst_fragment = fragment;
        }
      }
      ++instances;
    }
  }
  return {worst <= 1e-12, std::to_string(instances) + " instances over " + std::to_string(testkit::kFragments.size()) +
                              " fragments, max abs difference " + fmt("%.2e", worst) + " (" + worst_fragment + ")"};
}

// ---- 3 ----

Outcome rouge_correctness() {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> len(0, 8), sym(0, 4);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    TokenList cand(len(rng)), ref(len(rng));
    for (auto& t : cand) t = std::string(1, static_cast<char>('a' + sym(rng)));
    for (auto& t : ref) t = std::string(1, static_cast<char>('a' + sym(rng)));
    const double lcs = static_cast<double>(testkit::brute_force_lcs(cand, ref));
    const double r = ref.empty() ? 0.0 : lcs / static_cast<double>(ref.size());
    const double p = cand.empty() ? 0.0 : lcs / static_cast<double>(cand.size());
    const double f = r + p > 0 ? 2 * p * r / (p + r) : 0.0;
    const RougeTriple got = rouge_l(cand, ref);
    if (std::abs(got.recall - r) > 1e-15 || std::abs(got.precision - p) > 1e-15 || std::abs(got.f1 - f) > 1e-15) {
      ++mismatches;
    }
  }
  // Fixed n-gram examples, counted by hand.
  struct Fixed {
    TokenList cand, ref;
    int n;
    double recall, precision, f1;
  };
  const std::vector<Fixed> fixed = {
      {{"the", "cat", "sat"}, {"the", "cat"}, 1, 1.0, 2.0 / 3, 0.8},
      {{"the", "cat", "sat"}, {"the", "cat"}, 2, 1.0, 0.5, 2.0 / 3},
      {{"a", "b"}, {"c", "d"}, 1, 0.0, 0.0, 0.0},
      {{"a", "b", "c", "a"}, {"a", "b", "c", "a"}, 2, 1.0, 1.0, 1.0},
      {{"a"}, {"a"}, 2, 0.0, 0.0, 0.0},
  };
  std::size_t fixed_bad = 0;
  for (const auto& x : fixed) {
    const RougeTriple t = rouge_n(x.cand, x.ref, x.n);
    if (std::abs(t.recall - x.recall) > 1e-15 || std::abs(t.precision - x.precision) > 1e-15 ||
        std::abs(t.f1 - x.f1) > 1e-15 || std::abs(t.f1 - testkit::reference_rouge_n_f1(x.cand, x.ref, x.n)) > 1e-15) {
      ++fixed_bad;
    }
  }
  return {mismatches == 0 && fixed_bad == 0, "1000 random LCS pairs, " + std::to_string(mismatches) +
                                                 " mismatches; " + std::to_string(fixed.size()) +
                                                 " fixed n-gram examples, " + std::to_string(fixed_bad) + " wrong"};
}

// ---- 4 ----

Outcome overfit() {
  const auto planted = testkit::planted_corpus(1, 20);
  Corpus corpus = planted.corpus;
  for (auto& d : corpus.documents) d.labels = derive_labels(d);
  const Vocabulary vocab = build_vocab(corpus, 1000);
  index_corpus(corpus, vocab, {});
  const TrainConfig config = reduced_config(vocab.size(), 1);
  const TrainResult result = train(corpus, config);
  const double final_loss = result.report.epochs.back().train_loss;

  std::size_t recovered = 0, total = 0;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const std::vector<double> scores = predict_scores(result.final, config.model, corpus.documents[d]);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      ++total;
      recovered += (scores[i] >= 0.5) == (planted.planted[d][i] == 1);
    }
  }
  const bool ok = final_loss < 0.05 && result.report.epochs.size() <= 500 && recovered == total;
  return {ok, "train loss " + fmt("%.4f", final_loss) + " after " + std::to_string(result.report.epochs.size()) +
                  " epochs; planted labels recovered " + std::to_string(recovered) + "/" + std::to_string(total)};
}

// ---- 5 ----

// Both variants start from the same seed and train with early stopping on
// validation loss (patience 20, at most 500 epochs); patience 5 halts inside
// the initial plateau before either model has fit. A seed counts only when
// both variants converged (training loss < 0.05 at the best epoch). Ties are
// reported separately from strict wins.
Outcome architecture_comparison() {
  int at_most = 0, strict = 0, ties = 0, unconverged = 0;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Corpus train_corpus = labeled_planted(seed, 20), valid = labeled_planted(seed + 1000, 20);
    const Vocabulary vocab = build_vocab(train_corpus, 1000);
    index_corpus(train_corpus, vocab, {});
    index_corpus(valid, vocab, {});
    double loss[2];
    bool converged = true;
    for (int variant = 0; variant < 2; ++variant) {
      TrainConfig config = reduced_config(vocab.size(), seed);
      config.target_train_loss = 0.0;
      config.patience = 20;
      config.model.use_memnet = variant == 0;
      TrainOptions options;
      options.validation = &valid;
      const TrainReport report = train(train_corpus, config, options).report;
      loss[variant] = report.best_valid_loss;
      converged = converged && report.epochs[report.best_epoch - 1].train_loss < 0.05;
    }
    if (!converged) {
      ++unconverged;
      per_seed += (seed > 1 ? " " : "") + std::string("?");
      continue;
    }
    at_most += loss[0] <= loss[1];
    strict += loss[0] < loss[1];
    ties += loss[0] == loss[1];
    per_seed += (seed > 1 ? " " : "") + std::string(loss[0] < loss[1] ? "<" : loss[0] == loss[1] ? "=" : ">");
  }
  return {at_most >= 7, "hybrid <= recurrent-only on " + std::to_string(at_most) + "/10 seeds (" +
                            std::to_string(strict) + " strictly lower, " + std::to_string(ties) + " exact ties, " +
                            std::to_string(unconverged) + " unconverged) [" + per_seed + "]"};
}

// ---- 6 ----

Outcome attention_invariants() {
  ModelConfig config = testkit::toy_config(1000, 6, 8, 8);
  config.hops = 3;
  std::vector<Corpus> sets = {labeled_planted(77, 20), testkit::lead_corpus(78, 20), testkit::disjoint_corpus(79, 20)};
  Corpus singles;
  for (int i = 0; i < 10; ++i) {
    Document d;
    d.id = "single-" + std::to_string(i);
    d.raw_sentences = {"only sentence number " + std::to_string(i) + " here ."};
    d.highlights = {"only sentence"};
    singles.documents.push_back(d);
  }
  sets.push_back(singles);
  Corpus everything;
  for (const auto& s : sets) everything.documents.insert(everything.documents.end(), s.documents.begin(), s.documents.end());
  const Vocabulary vocab = build_vocab(everything, 1000);
  index_corpus(everything, vocab, {});
  config.vocab_size = vocab.size();
  const ModelParams params = init_params(config, 5);

  double worst = 0.0;
  std::size_t distributions = 0, single_bad = 0;
  NoGradGuard no_grad;
  for (const auto& doc : everything.documents) {
    const DocumentForward f = forward_document(params, config, doc.sentences);
    for (const Tensor& p : f.encoding.attention) {
      double total = 0.0;
      for (double v : p.data()) total += v;
      worst = std::max(worst, std::abs(total - 1.0));
      ++distributions;
      if (doc.sentences.size() == 1 && (p.size() != 1 || p.at(0) != 1.0)) ++single_bad;
    }
  }
  return {worst <= 1e-12 && single_bad == 0,
          std::to_string(distributions) + " hop distributions over " + std::to_string(everything.documents.size()) +
              " documents, max |sum - 1| " + fmt("%.2e", worst) + "; single-sentence p != [1]: " +
              std::to_string(single_bad)};
}

// ---- 7 ----

Outcome determinism(const fs::path& root) {
  save_corpus(root / "raw.jsonl", testkit::planted_corpus(3, 8).corpus);
  if (quiet_cli({"prep", "--input", root / "raw.jsonl", "--out", root / "prep"}) != 0) return {false, "prep failed"};
  auto train_args = [&](const std::string& out) {
    return std::vector<std::string>{"train",          "--train",    root / "prep/corpus.jsonl",
                                    "--vocab",        root / "prep/vocab.txt",
                                    "--word-dim",     "8",          "--sent-dim",
                                    "12",             "--doc-dim",  "16",
                                    "--max-epochs",   "4",          "--batch-size",
                                    "3",              "--seed",     "11",
                                    "--out",          root / out};
  };
  if (quiet_cli(train_args("t1")) != 0 || quiet_cli(train_args("t2")) != 0) return {false, "train failed"};
  const bool same_ckpt = slurp(root / "t1/model.ckpt") == slurp(root / "t2/model.ckpt");
  auto eval_args = [&](const std::string& out) {
    return std::vector<std::string>{"evaluate",     "--input", root / "prep/corpus.jsonl", "--system", "model",
                                    "--checkpoint", root / "t1/model.ckpt", "--vocab", root / "prep/vocab.txt",
                                    "--out",        root / out};
  };
  if (quiet_cli(eval_args("e1")) != 0 || quiet_cli(eval_args("e2")) != 0) return {false, "evaluate failed"};
  const bool same_eval = slurp(root / "e1/scores.tsv") == slurp(root / "e2/scores.tsv") &&
                         slurp(root / "e1/per_document.jsonl") == slurp(root / "e2/per_document.jsonl");
  const auto size = fs::file_size(root / "t1/model.ckpt");
  return {same_ckpt && same_eval, std::string("checkpoints (") + std::to_string(size) + " bytes) " +
                                      (same_ckpt ? "identical" : "DIFFER") + "; evaluate output " +
                                      (same_eval ? "identical" : "DIFFERS")};
}

// ---- 8 ----

Outcome lead_pipeline(const fs::path& root) {
  save_corpus(root / "lead.jsonl", testkit::lead_corpus(8, 25));
  save_corpus(root / "disjoint.jsonl", testkit::disjoint_corpus(8, 25));
  if (quiet_cli({"evaluate", "--input", root / "lead.jsonl", "--system", "lead", "--out", root / "lead"}) != 0 ||
      quiet_cli({"evaluate", "--input", root / "disjoint.jsonl", "--system", "lead", "--out", root / "disjoint"}) != 0) {
    return {false, "evaluate failed"};
  }
  auto row = [](const std::string& table) {
    const auto pos = table.find("\nLEAD\t");
    if (pos == std::string::npos) return std::string("<missing>");
    const auto start = pos + 1;
    return table.substr(start, table.find('\n', start) - start);
  };
  const std::string lead = row(slurp(root / "lead/scores.tsv"));
  const std::string disjoint = row(slurp(root / "disjoint/scores.tsv"));
  const bool ok = lead == "LEAD\t100.0\t100.0\t100.0" && disjoint == "LEAD\t0.0\t0.0\t0.0";
  auto show = [](std::string s) {
    for (char& ch : s) ch = ch == '\t' ? ' ' : ch;
    return s;
  };
  return {ok, "lead-3 highlights: " + show(lead) + "; disjoint highlights: " + show(disjoint)};
}

}  // namespace

int main() {
  const fs::path root = fs::temp_directory_path() / ("hmn_acceptance_" + std::to_string(getpid()));
  fs::remove_all(root);
  fs::create_directories(root / "determinism");
  fs::create_directories(root / "lead");

  const std::vector<Criterion> criteria = {
      {1, "gradient suite", 60, gradient_suite},
      {2, "oracle equivalence", 30, oracle_equivalence},
      {3, "ROUGE correctness", 30, rouge_correctness},
      {4, "overfit at reduced dimensions", 600, overfit},
      {5, "hybrid vs recurrent-only validation loss", 0, architecture_comparison},
      {6, "attention invariants", 0, attention_invariants},
      {7, "determinism", 0, [&] { return determinism(root / "determinism"); }},
      {8, "LEAD pipeline", 0, [&] { return lead_pipeline(root / "lead"); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.1fs", seconds);
    if (c.budget_seconds > 0) {
      timing += " of " + fmt("%.0fs", c.budget_seconds);
      if (seconds >= c.budget_seconds) {
        o.pass = false;
        timing += " OVER BUDGET";
      }
    }
    failures += !o.pass;
    std::printf("%s [%d] %s: %s (%s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(root);
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
