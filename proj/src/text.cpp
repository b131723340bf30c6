#include "hmn/text.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hmn/checkpoint.hpp"
#include "hmn/error.hpp"

namespace hmn {

using nlohmann::json;

namespace {

bool is_space(unsigned char c) { return c < 0x80 && std::isspace(c); }
bool is_punct(unsigned char c) { return c < 0x80 && std::ispunct(c); }

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_space(c)) {
      flush();
    } else if (is_punct(c)) {
      flush();
      tokens.emplace_back(1, ch);
    } else {
      current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> content_tokens(std::string_view text) {
  std::vector<std::string> tokens = tokenize(text);
  std::erase_if(tokens, [](const std::string& t) { return t.size() == 1 && is_punct(static_cast<unsigned char>(t[0])); });
  return tokens;
}

std::size_t word_count(std::string_view text) {
  std::size_t count = 0;
  bool in_word = false;
  for (char ch : text) {
    const bool space = is_space(static_cast<unsigned char>(ch));
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

Vocabulary::Vocabulary() : tokens_{kPadToken, kUnkToken}, ids_{{kPadToken, kPad}, {kUnkToken, kUnk}} {}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < 2 || tokens[0] != kPadToken || tokens[1] != kUnkToken) {
    throw PipelineError("vocabulary must start with the reserved tokens <pad> and <unk>");
  }
  Vocabulary vocab;
  vocab.tokens_ = std::move(tokens);
  vocab.ids_.clear();
  for (std::size_t i = 0; i < vocab.tokens_.size(); ++i) {
    if (!vocab.ids_.emplace(vocab.tokens_[i], static_cast<int>(i)).second) {
      throw PipelineError("duplicate vocabulary token '" + vocab.tokens_[i] + "'");
    }
  }
  return vocab;
}

int Vocabulary::id(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw PipelineError("token id " + std::to_string(id) + " outside vocabulary of " + std::to_string(size()));
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocabulary::encode(const std::vector<std::string>& tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(id(t));
  return ids;
}

std::string Vocabulary::content_hash() const {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  for (const auto& t : tokens_) {
    for (char c : t) mix(static_cast<unsigned char>(c));
    mix('\n');
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::string out;
  for (const auto& t : tokens_) out += t + "\n";
  write_file_atomic(path, out);
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PipelineError("cannot open vocabulary '" + path.string() + "'");
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) tokens.push_back(line);
  return from_tokens(std::move(tokens));
}

const char* split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest: return "test";
  }
  return "unknown";
}

Vocabulary build_vocab(const Corpus& corpus, std::size_t max_size) {
  if (max_size <= 2) throw PipelineError("vocabulary size must exceed the 2 reserved entries");
  if (corpus.documents.empty()) throw PipelineError("cannot build a vocabulary from an empty corpus");
  std::map<std::string, std::size_t> counts;
  for (const auto& doc : corpus.documents) {
    for (const auto& sentence : doc.raw_sentences) {
      for (auto& t : tokenize(sentence)) ++counts[t];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  // counts is already lexicographic, so a stable sort on frequency keeps ties in order.
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens = {Vocabulary::kPadToken, Vocabulary::kUnkToken};
  for (const auto& [token, count] : ranked) {
    if (tokens.size() >= max_size) break;
    if (token == Vocabulary::kPadToken || token == Vocabulary::kUnkToken) continue;
    tokens.push_back(token);
  }
  return Vocabulary::from_tokens(std::move(tokens));
}

void index_document(Document& doc, const Vocabulary& vocab, const TextLimits& limits) {
  if (doc.raw_sentences.size() > limits.max_sentences) {
    doc.raw_sentences.resize(limits.max_sentences);
    if (doc.labels) doc.labels->resize(limits.max_sentences);
  }
  doc.sentences.clear();
  for (const auto& sentence : doc.raw_sentences) {
    auto tokens = tokenize(sentence);
    if (tokens.size() > limits.max_sentence_tokens) tokens.resize(limits.max_sentence_tokens);
    doc.sentences.push_back(vocab.encode(tokens));
  }
}

void index_corpus(Corpus& corpus, const Vocabulary& vocab, const TextLimits& limits) {
  for (auto& doc : corpus.documents) index_document(doc, vocab, limits);
}

void validate_document(const Document& doc) {
  const std::string who = "document '" + doc.id + "'";
  if (doc.id.empty()) throw ValidationError("document with empty id");
  if (doc.raw_sentences.empty()) throw ValidationError(who + " has no sentences");
  for (std::size_t i = 0; i < doc.raw_sentences.size(); ++i) {
    if (tokenize(doc.raw_sentences[i]).empty()) {
      throw ValidationError(who + ": sentence " + std::to_string(i) + " has no tokens");
    }
  }
  if (doc.labels) {
    if (doc.labels->size() != doc.raw_sentences.size()) {
      throw ValidationError(who + " has " + std::to_string(doc.labels->size()) + " labels for " +
                            std::to_string(doc.raw_sentences.size()) + " sentences");
    }
    for (int y : *doc.labels) {
      if (y != 0 && y != 1) throw ValidationError(who + " has a label outside {0,1}");
    }
  }
}

Document parse_document(std::string_view line, std::size_t line_number) {
  json record;
  try {
    record = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(line_number, std::string("invalid JSON: ") + e.what());
  }
  if (!record.is_object()) throw ParseError(line_number, "record is not a JSON object");
  auto string_list = [&](const char* field, bool required) {
    std::vector<std::string> out;
    auto it = record.find(field);
    if (it == record.end()) {
      if (required) throw ParseError(line_number, std::string("missing field \"") + field + "\"");
      return out;
    }
    if (!it->is_array()) throw ParseError(line_number, std::string("field \"") + field + "\" is not an array");
    for (const auto& v : *it) {
      if (!v.is_string()) throw ParseError(line_number, std::string("field \"") + field + "\" holds a non-string");
      out.push_back(v.get<std::string>());
    }
    return out;
  };
  Document doc;
  auto id = record.find("id");
  if (id == record.end()) throw ParseError(line_number, "missing field \"id\"");
  if (!id->is_string()) throw ParseError(line_number, "field \"id\" is not a string");
  doc.id = id->get<std::string>();
  doc.raw_sentences = string_list("sentences", true);
  doc.highlights = string_list("highlights", false);
  if (auto labels = record.find("labels"); labels != record.end() && !labels->is_null()) {
    if (!labels->is_array()) throw ParseError(line_number, "field \"labels\" is not an array");
    std::vector<int> ys;
    for (const auto& v : *labels) {
      if (!v.is_number_integer()) throw ParseError(line_number, "field \"labels\" holds a non-integer");
      ys.push_back(v.get<int>());
    }
    doc.labels = std::move(ys);
  }
  try {
    validate_document(doc);
  } catch (const ValidationError& e) {
    throw ValidationError("line " + std::to_string(line_number) + ": " + e.what());
  }
  return doc;
}

std::string format_document(const Document& doc) {
  json record;
  record["id"] = doc.id;
  record["sentences"] = doc.raw_sentences;
  record["highlights"] = doc.highlights;
  if (doc.labels) record["labels"] = *doc.labels;
  return record.dump();
}

Corpus load_corpus(const std::filesystem::path& path, Split split) {
  std::ifstream in(path);
  if (!in) throw PipelineError("cannot open corpus '" + path.string() + "'");
  Corpus corpus;
  corpus.split = split;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Document doc = parse_document(line, line_number);
    if (!seen.insert(doc.id).second) {
      throw ValidationError("line " + std::to_string(line_number) + ": duplicate document id '" + doc.id + "'");
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::string out;
  for (const auto& doc : corpus.documents) out += format_document(doc) + "\n";
  write_file_atomic(path, out);
}

}  // namespace hmn
