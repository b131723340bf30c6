#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "hmn/evaluation.hpp"
#include "hmn/text.hpp"
#include "testkit.hpp"

namespace hmn {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("hmn_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path path(const std::string& name) const { return root_ / name; }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "hmn");
    ::testing::internal::CaptureStdout();
    ::testing::internal::CaptureStderr();
    const int code = cli::run(args);
    out_ = ::testing::internal::GetCapturedStdout();
    err_ = ::testing::internal::GetCapturedStderr();
    return code;
  }

  // Writes a planted corpus and runs prep on it, leaving corpus.jsonl and vocab.txt in `dir`.
  void prepared(const std::string& dir, std::uint64_t seed = 1, std::size_t docs = 6) {
    save_corpus(path("raw.jsonl"), testkit::planted_corpus(seed, docs).corpus);
    ASSERT_EQ(run({"prep", "--input", path("raw.jsonl"), "--out", path(dir)}), 0) << err_;
  }

  std::vector<std::string> small_train(const std::string& dir, const std::string& out) {
    return {"train",          "--train",  path(dir + "/corpus.jsonl"), "--vocab", path(dir + "/vocab.txt"),
            "--word-dim",     "6",        "--sent-dim",                "6",       "--doc-dim",
            "8",              "--kernel-widths", "1,2,3",             "--mlp-hidden", "4",
            "--max-epochs",   "3",        "--batch-size",              "2",       "--out",
            path(out)};
  }

  fs::path root_;
  std::string out_, err_;
};

TEST_F(CliTest, PrepWritesLabelsAndVocabulary) {
  prepared("prep");
  const Corpus c = load_corpus(path("prep/corpus.jsonl"), Split::kTrain);
  ASSERT_EQ(c.documents.size(), 6u);
  for (const auto& d : c.documents) {
    ASSERT_TRUE(d.labels.has_value());
    EXPECT_EQ(d.labels->size(), d.raw_sentences.size());
  }
  EXPECT_TRUE(fs::exists(path("prep/vocab.txt")));
  EXPECT_NE(out_.find("documents\t6"), std::string::npos) << out_;
  const json manifest = json::parse(slurp(path("prep/manifest.json")));
  EXPECT_EQ(manifest["command"], "prep");
  EXPECT_EQ(manifest["version"], cli::kToolVersion);
}

TEST_F(CliTest, PrepIsByteIdenticalOnRerun) {
  prepared("a");
  ASSERT_EQ(run({"prep", "--input", path("raw.jsonl"), "--out", path("b")}), 0);
  EXPECT_EQ(slurp(path("a/corpus.jsonl")), slurp(path("b/corpus.jsonl")));
  EXPECT_EQ(slurp(path("a/vocab.txt")), slurp(path("b/vocab.txt")));
}

TEST_F(CliTest, PrepRejectsDocumentWithoutHighlights) {
  Corpus c = testkit::planted_corpus(2, 3).corpus;
  c.documents[2].highlights.clear();
  save_corpus(path("raw.jsonl"), c);
  EXPECT_EQ(run({"prep", "--input", path("raw.jsonl"), "--out", path("p")}), 1);
  EXPECT_NE(err_.find(c.documents[2].id), std::string::npos) << err_;
}

TEST_F(CliTest, MissingRequiredFlagIsUsageFailure) {
  EXPECT_EQ(run({"prep", "--out", path("p")}), 1);
  EXPECT_EQ(run({"frobnicate"}), 1);
}

TEST_F(CliTest, TrainWritesCheckpointConfigAndReport) {
  prepared("prep");
  ASSERT_EQ(run(small_train("prep", "t")), 0) << err_;
  EXPECT_TRUE(fs::exists(path("t/model.ckpt")));
  const json report = json::parse(slurp(path("t/report.json")));
  EXPECT_EQ(report["epochs"].size(), 3u);
  const json config = json::parse(slurp(path("t/config.json")));
  EXPECT_EQ(config["doc_dim"], 8);
  EXPECT_EQ(config["kernel_widths"], json::array({1, 2, 3}));
  EXPECT_EQ(config["batch_size"], 2);
  EXPECT_EQ(config["beta1"], 0.99);
}

TEST_F(CliTest, TrainDefaultsToFullScaleDimensions) {
  prepared("prep", 3, 2);
  ASSERT_EQ(run({"train", "--train", path("prep/corpus.jsonl"), "--vocab", path("prep/vocab.txt"), "--max-epochs",
                 "1", "--out", path("t")}),
            0)
      << err_;
  const json config = json::parse(slurp(path("t/manifest.json")))["config"];
  EXPECT_EQ(config["word_dim"], 150);
  EXPECT_EQ(config["sent_dim"], 300);
  EXPECT_EQ(config["doc_dim"], 750);
  EXPECT_EQ(config["hops"], 2);
  EXPECT_EQ(config["encoder_mode"], "blstm");
  EXPECT_EQ(config["learning_rate"], 0.001);
}

TEST_F(CliTest, EncoderFlagOnlyChangesEncoderField) {
  prepared("prep");
  auto lstm = small_train("prep", "lstm");
  lstm.insert(lstm.end(), {"--encoder", "lstm"});
  auto blstm = small_train("prep", "blstm");
  blstm.insert(blstm.end(), {"--encoder", "blstm"});
  ASSERT_EQ(run(lstm), 0) << err_;
  ASSERT_EQ(run(blstm), 0) << err_;
  json a = json::parse(slurp(path("lstm/manifest.json")))["config"];
  json b = json::parse(slurp(path("blstm/manifest.json")))["config"];
  EXPECT_EQ(a["encoder_mode"], "lstm");
  EXPECT_EQ(b["encoder_mode"], "blstm");
  a.erase("encoder_mode");
  b.erase("encoder_mode");
  EXPECT_EQ(a, b);
}

TEST_F(CliTest, SameSeedGivesIdenticalCheckpoints) {
  prepared("prep");
  auto first = small_train("prep", "one");
  first.insert(first.end(), {"--seed", "7"});
  auto second = small_train("prep", "two");
  second.insert(second.end(), {"--seed", "7"});
  auto third = small_train("prep", "three");
  third.insert(third.end(), {"--seed", "8"});
  ASSERT_EQ(run(first), 0) << err_;
  ASSERT_EQ(run(second), 0) << err_;
  ASSERT_EQ(run(third), 0) << err_;
  EXPECT_EQ(slurp(path("one/model.ckpt")), slurp(path("two/model.ckpt")));
  EXPECT_NE(slurp(path("one/model.ckpt")), slurp(path("three/model.ckpt")));
}

TEST_F(CliTest, ConfigFileSuppliesDefaultsAndFlagsOverride) {
  prepared("prep");
  std::ofstream(path("cfg.json")) << R"({"doc_dim": 10, "hops": 1, "max_epochs": 1})";
  auto args = small_train("prep", "t");
  args.insert(args.end(), {"--config", path("cfg.json")});
  ASSERT_EQ(run(args), 0) << err_;
  const json config = json::parse(slurp(path("t/config.json")));
  EXPECT_EQ(config["hops"], 1);
  EXPECT_EQ(config["doc_dim"], 8);
  EXPECT_EQ(config["max_epochs"], 3);
}

TEST_F(CliTest, SummarizeEmitsOneRecordPerDocument) {
  prepared("prep");
  ASSERT_EQ(run(small_train("prep", "t")), 0) << err_;
  Corpus single;
  for (int i = 0; i < 3; ++i) {
    Document d;
    d.id = "single-" + std::to_string(i);
    d.raw_sentences = {"breaking key1 key2 key3 key4 ."};
    single.documents.push_back(d);
  }
  save_corpus(path("single.jsonl"), single);
  const std::vector<std::string> base = {"summarize", "--checkpoint", path("t/model.ckpt"), "--vocab",
                                         path("prep/vocab.txt"), "--input"};
  auto a = base;
  a.insert(a.end(), {path("single.jsonl"), "--out", path("s1")});
  ASSERT_EQ(run(a), 0) << err_;
  std::istringstream lines(slurp(path("s1/summaries.jsonl")));
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    const json rec = json::parse(line);
    EXPECT_EQ(rec["id"], "single-" + std::to_string(n));
    EXPECT_EQ(rec["indices"], json::array({0}));
    ++n;
  }
  EXPECT_EQ(n, 3u);

  auto b = base;
  b.insert(b.end(), {path("prep/corpus.jsonl"), "--out", path("s2")});
  auto c = base;
  c.insert(c.end(), {path("prep/corpus.jsonl"), "--out", path("s3")});
  ASSERT_EQ(run(b), 0) << err_;
  ASSERT_EQ(run(c), 0) << err_;
  EXPECT_EQ(slurp(path("s2/summaries.jsonl")), slurp(path("s3/summaries.jsonl")));
}

TEST_F(CliTest, SummarizeRejectsMismatchedVocabulary) {
  prepared("prep");
  ASSERT_EQ(run(small_train("prep", "t")), 0) << err_;
  std::ofstream(path("other.txt")) << "<pad>\n<unk>\nzebra\n";
  EXPECT_EQ(run({"summarize", "--checkpoint", path("t/model.ckpt"), "--vocab", path("other.txt"), "--input",
                 path("prep/corpus.jsonl"), "--out", path("s")}),
            1);
  EXPECT_NE(err_.find("does not match"), std::string::npos) << err_;
}

TEST_F(CliTest, EvaluateLeadOnLeadCorpusIsPerfect) {
  save_corpus(path("lead.jsonl"), testkit::lead_corpus(4, 8));
  ASSERT_EQ(run({"evaluate", "--input", path("lead.jsonl"), "--system", "lead", "--out", path("e")}), 0) << err_;
  const std::string table = slurp(path("e/scores.tsv"));
  EXPECT_EQ(table,
            "# measure=f1 stem=off stopwords=kept\n"
            "system\tROUGE-1\tROUGE-2\tROUGE-L\n"
            "LEAD\t100.0\t100.0\t100.0\n");
  EXPECT_EQ(out_, table);
}

TEST_F(CliTest, EvaluateHeaderReflectsFlags) {
  save_corpus(path("lead.jsonl"), testkit::lead_corpus(4, 3));
  ASSERT_EQ(run({"evaluate", "--input", path("lead.jsonl"), "--stem", "--remove-stopwords", "--measure", "recall",
                 "--out", path("e")}),
            0)
      << err_;
  EXPECT_EQ(slurp(path("e/scores.tsv")).rfind("# measure=recall stem=on stopwords=removed\n", 0), 0u);
}

TEST_F(CliTest, EvaluateModelIsByteIdenticalOnRerun) {
  prepared("prep");
  ASSERT_EQ(run(small_train("prep", "t")), 0) << err_;
  for (const char* out : {"e1", "e2"}) {
    ASSERT_EQ(run({"evaluate", "--input", path("prep/corpus.jsonl"), "--system", "model", "--checkpoint",
                   path("t/model.ckpt"), "--vocab", path("prep/vocab.txt"), "--out", path(out)}),
              0)
        << err_;
  }
  EXPECT_EQ(slurp(path("e1/scores.tsv")), slurp(path("e2/scores.tsv")));
  EXPECT_EQ(slurp(path("e1/per_document.jsonl")), slurp(path("e2/per_document.jsonl")));
  EXPECT_NE(slurp(path("e1/scores.tsv")).find("\nmodel\t"), std::string::npos);
}

TEST_F(CliTest, EvaluateScoresSummariesFile) {
  const Corpus c = testkit::lead_corpus(6, 4);
  save_corpus(path("lead.jsonl"), c);
  std::string lines;
  for (const auto& d : c.documents) lines += json{{"id", d.id}, {"text", reference_text(d)}}.dump() + "\n";
  std::ofstream(path("sums.jsonl")) << lines;
  ASSERT_EQ(run({"evaluate", "--input", path("lead.jsonl"), "--summaries", path("sums.jsonl"), "--name", "oracle",
                 "--out", path("e")}),
            0)
      << err_;
  EXPECT_NE(slurp(path("e/scores.tsv")).find("oracle\t100.0\t100.0\t100.0"), std::string::npos);
}

}  // namespace
}  // namespace hmn
