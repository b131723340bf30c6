#pragma once

#include <cstddef>
#include <vector>

#include "hmn/rouge.hpp"
#include "hmn/text.hpp"

namespace hmn {

inline constexpr std::size_t kOracleBudget = 3;

// Objective the label oracle maximizes: mean of ROUGE-1 F1 and ROUGE-2 F1
// between the selected sentences (in document order) and the reference.
double oracle_objective(const std::vector<TokenList>& sentence_tokens, const std::vector<std::size_t>& selected,
                        const TokenList& reference);

struct OracleResult {
  std::vector<int> labels;
  std::vector<std::size_t> selected;  // in pick order
  std::vector<double> step_scores;    // objective after each pick
};

// Greedy extractive oracle against the concatenated highlights. Adds the
// sentence with the largest strict improvement until none improves or the
// budget is reached. Throws LabelingError when the document has no highlights.
OracleResult greedy_oracle(const Document& doc, std::size_t budget = kOracleBudget);
std::vector<int> derive_labels(const Document& doc);

}  // namespace hmn
