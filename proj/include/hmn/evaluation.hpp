#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hmn/rouge.hpp"
#include "hmn/text.hpp"

namespace hmn {

inline constexpr std::size_t kSummarySentences = 3;
inline constexpr std::size_t kSummaryWordLimit = 75;

struct Summary {
  std::vector<std::size_t> indices;  // 0-based, document order
  std::string text;
  std::size_t word_count = 0;
};

/// Top-scored sentences under the length budget. Candidates are ranked by
/// score (ties to the earlier sentence) and taken greedily, skipping any that
/// would push the total past 75 words, up to three. When the top sentence
/// alone is over budget it is returned cut to its first 75 words.
Summary extract_summary(const Document& doc, std::span<const double> scores);

// First three sentences under the same budget.
Summary lead_baseline(const Document& doc);

// Highlights joined into the single reference text scored against.
std::string reference_text(const Document& doc);

using Summarizer = std::function<Summary(const Document&)>;

struct DocumentScore {
  std::string id;
  Summary summary;
  RougeScores scores;
};

struct EvaluationResult {
  std::vector<DocumentScore> documents;
  RougeScores mean;
};

// Scores every document's summary against its highlights and macro-averages.
// Throws EvaluationError naming the first document without highlights.
EvaluationResult evaluate_corpus(const Corpus& corpus, const Summarizer& summarizer, const RougeOptions& options = {});

enum class Measure { kF1, kRecall, kPrecision };

const char* measure_name(Measure measure);
Measure parse_measure(const std::string& name);

// Tab-separated: a comment line with the ROUGE settings, a column header, then
// one row per system with percentages to one decimal.
struct TableRow {
  std::string system;
  RougeScores scores;
};
std::string format_table(std::span<const TableRow> rows, const RougeOptions& options, Measure measure = Measure::kF1);

// One JSON object per line with each document's summary and full scores.
std::string format_per_document(const EvaluationResult& result);

nlohmann::json scores_to_json(const RougeScores& scores);

}  // namespace hmn
