#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hmn {

using TokenList = std::vector<std::string>;

struct RougeTriple {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

struct RougeScores {
  RougeTriple rouge1;
  RougeTriple rouge2;
  RougeTriple rougeL;
};

// 2pr/(p+r), or 0 when both are 0.
double f_measure(double precision, double recall);

// Clipped n-gram overlap. Reference counts are the multiset union (max count
// per n-gram) over `references`.
RougeTriple rouge_n(const TokenList& candidate, std::span<const TokenList> references, int n);
RougeTriple rouge_n(const TokenList& candidate, const TokenList& reference, int n);

std::size_t lcs_length(const TokenList& a, const TokenList& b);
RougeTriple rouge_l(const TokenList& candidate, const TokenList& reference);
// Best-F1 score over the references.
RougeTriple rouge_l(const TokenList& candidate, std::span<const TokenList> references);

std::string porter_stem(const std::string& word);
bool is_stopword(std::string_view word);

struct RougeOptions {
  bool stem = false;
  bool remove_stopwords = false;
};

// Tokenization used for every ROUGE comparison: content_tokens() followed by
// the optional stopword filter and stemmer.
TokenList rouge_tokens(std::string_view text, const RougeOptions& options);

RougeScores score_summary(const TokenList& candidate, std::span<const TokenList> references);

}  // namespace hmn
