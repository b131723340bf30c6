#include "hmn/rouge.hpp"

#include <algorithm>
#include <iterator>
#include <map>

#include "hmn/error.hpp"
#include "hmn/text.hpp"

namespace hmn {
namespace {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts count_ngrams(const TokenList& tokens, int n) {
  NgramCounts counts;
  const auto width = static_cast<std::size_t>(n);
  if (tokens.size() < width) return counts;
  for (std::size_t i = 0; i + width <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + width))];
  }
  return counts;
}

RougeTriple make_triple(double matches, double reference_total, double candidate_total) {
  RougeTriple t;
  t.recall = reference_total > 0 ? matches / reference_total : 0.0;
  t.precision = candidate_total > 0 ? matches / candidate_total : 0.0;
  t.f1 = f_measure(t.precision, t.recall);
  return t;
}

// SMART-style English stopword list, sorted for binary search.
constexpr std::string_view kStopwords[] = {
    "a",       "about",  "above",   "after",  "again",  "against", "all",     "am",     "an",     "and",
    "any",     "are",    "as",      "at",     "be",     "because", "been",    "before", "being",  "below",
    "between", "both",   "but",     "by",     "can",    "could",   "did",     "do",     "does",   "doing",
    "down",    "during", "each",    "few",    "for",    "from",    "further", "had",    "has",    "have",
    "having",  "he",     "her",     "here",   "hers",   "herself", "him",     "himself", "his",   "how",
    "i",       "if",     "in",      "into",   "is",     "it",      "its",     "itself", "just",   "me",
    "more",    "most",   "my",      "myself", "no",     "nor",     "not",     "now",    "of",     "off",
    "on",      "once",   "only",    "or",     "other",  "our",     "ours",    "ourselves", "out", "over",
    "own",     "s",      "same",    "she",    "should", "so",      "some",    "such",   "t",      "than",
    "that",    "the",    "their",   "theirs", "them",   "themselves", "then", "there",  "these",  "they",
    "this",    "those",  "through", "to",     "too",    "under",   "until",   "up",     "very",   "was",
    "we",      "were",   "what",    "when",   "where",  "which",   "while",   "who",    "whom",   "why",
    "will",    "with",   "would",   "you",    "your",   "yours",   "yourself",
};

}  // namespace

double f_measure(double precision, double recall) {
  return precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

RougeTriple rouge_n(const TokenList& candidate, std::span<const TokenList> references, int n) {
  if (n != 1 && n != 2) throw EvaluationError("rouge_n supports n in {1, 2}, got " + std::to_string(n));
  NgramCounts reference;
  for (const auto& ref : references) {
    for (const auto& [gram, count] : count_ngrams(ref, n)) {
      auto& slot = reference[gram];
      slot = std::max(slot, count);
    }
  }
  const NgramCounts cand = count_ngrams(candidate, n);
  double matches = 0, reference_total = 0, candidate_total = 0;
  for (const auto& [gram, count] : reference) reference_total += static_cast<double>(count);
  for (const auto& [gram, count] : cand) {
    candidate_total += static_cast<double>(count);
    auto it = reference.find(gram);
    if (it != reference.end()) matches += static_cast<double>(std::min(count, it->second));
  }
  return make_triple(matches, reference_total, candidate_total);
}

RougeTriple rouge_n(const TokenList& candidate, const TokenList& reference, int n) {
  return rouge_n(candidate, std::span<const TokenList>(&reference, 1), n);
}

std::size_t lcs_length(const TokenList& a, const TokenList& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeTriple rouge_l(const TokenList& candidate, const TokenList& reference) {
  const double lcs = static_cast<double>(lcs_length(candidate, reference));
  return make_triple(lcs, static_cast<double>(reference.size()), static_cast<double>(candidate.size()));
}

RougeTriple rouge_l(const TokenList& candidate, std::span<const TokenList> references) {
  RougeTriple best;
  bool first = true;
  for (const auto& ref : references) {
    RougeTriple t = rouge_l(candidate, ref);
    if (first || t.f1 > best.f1) best = t;
    first = false;
  }
  return best;
}

bool is_stopword(std::string_view word) {
  return std::binary_search(std::begin(kStopwords), std::end(kStopwords), word);
}

TokenList rouge_tokens(std::string_view text, const RougeOptions& options) {
  TokenList tokens = content_tokens(text);
  if (options.remove_stopwords) std::erase_if(tokens, [](const std::string& t) { return is_stopword(t); });
  if (options.stem) {
    for (auto& t : tokens) t = porter_stem(t);
  }
  return tokens;
}

RougeScores score_summary(const TokenList& candidate, std::span<const TokenList> references) {
  RougeScores s;
  s.rouge1 = rouge_n(candidate, references, 1);
  s.rouge2 = rouge_n(candidate, references, 2);
  s.rougeL = rouge_l(candidate, references);
  return s;
}

}  // namespace hmn
