#include "hmn/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "hmn/error.hpp"

namespace hmn {

namespace {

std::vector<std::string> split_words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(std::move(w));
  return words;
}

std::string join(const std::vector<std::string>& parts, std::size_t limit) {
  std::string out;
  for (std::size_t i = 0; i < std::min(limit, parts.size()); ++i) {
    if (i > 0) out += ' ';
    out += parts[i];
  }
  return out;
}

Summary assemble(const Document& doc, std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  Summary s;
  std::vector<std::string> texts;
  for (std::size_t i : indices) {
    texts.push_back(doc.raw_sentences[i]);
    s.word_count += word_count(doc.raw_sentences[i]);
  }
  s.indices = std::move(indices);
  s.text = join(texts, texts.size());
  return s;
}

// Greedy budgeted selection over `ranked` (best first).
Summary select(const Document& doc, const std::vector<std::size_t>& ranked) {
  if (ranked.empty()) return {};
  const std::size_t top = ranked.front();
  const std::size_t top_words = word_count(doc.raw_sentences[top]);
  if (top_words > kSummaryWordLimit) {
    Summary s;
    s.indices = {top};
    s.text = join(split_words(doc.raw_sentences[top]), kSummaryWordLimit);
    s.word_count = kSummaryWordLimit;
    return s;
  }
  std::vector<std::size_t> chosen;
  std::size_t words = 0;
  for (std::size_t i : ranked) {
    if (chosen.size() == kSummarySentences) break;
    const std::size_t n = word_count(doc.raw_sentences[i]);
    if (words + n > kSummaryWordLimit) continue;
    chosen.push_back(i);
    words += n;
  }
  return assemble(doc, std::move(chosen));
}

RougeTriple& triple(RougeScores& s, int which) {
  return which == 0 ? s.rouge1 : which == 1 ? s.rouge2 : s.rougeL;
}

const RougeTriple& triple(const RougeScores& s, int which) {
  return which == 0 ? s.rouge1 : which == 1 ? s.rouge2 : s.rougeL;
}

}  // namespace

Summary extract_summary(const Document& doc, std::span<const double> scores) {
  if (scores.size() != doc.raw_sentences.size()) {
    throw EvaluationError("document '" + doc.id + "': " + std::to_string(scores.size()) + " scores for " +
                          std::to_string(doc.raw_sentences.size()) + " sentences");
  }
  std::vector<std::size_t> ranked(scores.size());
  std::iota(ranked.begin(), ranked.end(), 0);
  std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return select(doc, ranked);
}

Summary lead_baseline(const Document& doc) {
  std::vector<std::size_t> order(doc.raw_sentences.size());
  std::iota(order.begin(), order.end(), 0);
  if (order.size() > kSummarySentences) order.resize(kSummarySentences);
  return select(doc, order);
}

std::string reference_text(const Document& doc) {
  std::string out;
  for (const auto& h : doc.highlights) {
    if (!out.empty()) out += ' ';
    out += h;
  }
  return out;
}

EvaluationResult evaluate_corpus(const Corpus& corpus, const Summarizer& summarizer, const RougeOptions& options) {
  if (corpus.documents.empty()) throw EvaluationError("cannot evaluate an empty corpus");
  for (const auto& doc : corpus.documents) {
    if (doc.highlights.empty()) throw EvaluationError("document '" + doc.id + "' has no highlights");
  }
  EvaluationResult result;
  for (const auto& doc : corpus.documents) {
    DocumentScore ds;
    ds.id = doc.id;
    ds.summary = summarizer(doc);
    const TokenList refs[] = {rouge_tokens(reference_text(doc), options)};
    ds.scores = score_summary(rouge_tokens(ds.summary.text, options), refs);
    for (int k = 0; k < 3; ++k) {
      RougeTriple& acc = triple(result.mean, k);
      const RougeTriple& t = triple(ds.scores, k);
      acc.recall += t.recall;
      acc.precision += t.precision;
      acc.f1 += t.f1;
    }
    result.documents.push_back(std::move(ds));
  }
  const double n = static_cast<double>(result.documents.size());
  for (int k = 0; k < 3; ++k) {
    RougeTriple& acc = triple(result.mean, k);
    acc.recall /= n;
    acc.precision /= n;
    acc.f1 /= n;
  }
  return result;
}

const char* measure_name(Measure measure) {
  switch (measure) {
    case Measure::kF1: return "f1";
    case Measure::kRecall: return "recall";
    case Measure::kPrecision: return "precision";
  }
  return "f1";
}

Measure parse_measure(const std::string& name) {
  if (name == "f1") return Measure::kF1;
  if (name == "recall") return Measure::kRecall;
  if (name == "precision") return Measure::kPrecision;
  throw UsageError("unknown measure '" + name + "' (expected f1, recall or precision)");
}

std::string format_table(std::span<const TableRow> rows, const RougeOptions& options, Measure measure) {
  std::string out = "# measure=" + std::string(measure_name(measure)) + " stem=" + (options.stem ? "on" : "off") +
                    " stopwords=" + (options.remove_stopwords ? "removed" : "kept") + "\n";
  out += "system\tROUGE-1\tROUGE-2\tROUGE-L\n";
  for (const auto& row : rows) {
    out += row.system;
    for (int k = 0; k < 3; ++k) {
      const RougeTriple& t = triple(row.scores, k);
      const double v = measure == Measure::kF1 ? t.f1 : measure == Measure::kRecall ? t.recall : t.precision;
      char cell[32];
      std::snprintf(cell, sizeof cell, "\t%.1f", 100.0 * v);
      out += cell;
    }
    out += '\n';
  }
  return out;
}

nlohmann::json scores_to_json(const RougeScores& scores) {
  auto one = [](const RougeTriple& t) {
    return nlohmann::json{{"f1", t.f1}, {"precision", t.precision}, {"recall", t.recall}};
  };
  return {{"rouge1", one(scores.rouge1)}, {"rouge2", one(scores.rouge2)}, {"rougeL", one(scores.rougeL)}};
}

std::string format_per_document(const EvaluationResult& result) {
  std::string out;
  for (const auto& d : result.documents) {
    nlohmann::json j{{"id", d.id},
                     {"indices", d.summary.indices},
                     {"scores", scores_to_json(d.scores)},
                     {"word_count", d.summary.word_count}};
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace hmn
