#include "hmn/labels.hpp"

#include <algorithm>

#include "hmn/error.hpp"

namespace hmn {

double oracle_objective(const std::vector<TokenList>& sentence_tokens, const std::vector<std::size_t>& selected,
                        const TokenList& reference) {
  std::vector<std::size_t> ordered = selected;
  std::sort(ordered.begin(), ordered.end());
  TokenList candidate;
  for (std::size_t i : ordered) candidate.insert(candidate.end(), sentence_tokens[i].begin(), sentence_tokens[i].end());
  return 0.5 * (rouge_n(candidate, reference, 1).f1 + rouge_n(candidate, reference, 2).f1);
}

OracleResult greedy_oracle(const Document& doc, std::size_t budget) {
  if (doc.highlights.empty()) throw LabelingError("document '" + doc.id + "' has no highlights to label against");
  const RougeOptions plain;
  TokenList reference;
  for (const auto& h : doc.highlights) {
    TokenList t = rouge_tokens(h, plain);
    reference.insert(reference.end(), t.begin(), t.end());
  }
  std::vector<TokenList> sentences;
  for (const auto& s : doc.raw_sentences) sentences.push_back(rouge_tokens(s, plain));

  OracleResult result;
  result.labels.assign(sentences.size(), 0);
  double current = 0.0;
  while (result.selected.size() < budget) {
    double best_score = current;
    std::size_t best = sentences.size();
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (result.labels[i] == 1) continue;
      auto trial = result.selected;
      trial.push_back(i);
      const double score = oracle_objective(sentences, trial, reference);
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    if (best == sentences.size()) break;
    result.selected.push_back(best);
    result.labels[best] = 1;
    result.step_scores.push_back(best_score);
    current = best_score;
  }
  return result;
}

std::vector<int> derive_labels(const Document& doc) { return greedy_oracle(doc).labels; }

}  // namespace hmn
