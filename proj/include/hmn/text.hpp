#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hmn {

/// Lowercases ASCII letters and splits on whitespace; every ASCII punctuation
/// character becomes its own token. Bytes >= 0x80 are treated as word
/// characters so UTF-8 text passes through intact.
std::vector<std::string> tokenize(std::string_view text);

// Tokens with pure-punctuation entries removed; used for ROUGE scoring.
std::vector<std::string> content_tokens(std::string_view text);

// Whitespace-delimited word count, the unit of the summary length budget.
std::size_t word_count(std::string_view text);

class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr const char* kPadToken = "<pad>";
  static constexpr const char* kUnkToken = "<unk>";

  Vocabulary();
  // Tokens in id order; the first two must be the reserved PAD/UNK tokens.
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  int id(const std::string& token) const;
  const std::string& token(int id) const;
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::vector<int> encode(const std::vector<std::string>& tokens) const;

  // FNV-1a over the newline-joined token list, as 16 hex digits.
  std::string content_hash() const;

  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

struct Document {
  std::string id;
  std::vector<std::string> raw_sentences;
  std::vector<std::string> highlights;
  std::optional<std::vector<int>> labels;
  // Token ids per sentence; filled by index_document().
  std::vector<std::vector<int>> sentences;

  std::size_t sentence_count() const { return raw_sentences.size(); }
};

enum class Split { kTrain, kValid, kTest };

const char* split_name(Split split);

struct Corpus {
  Split split = Split::kTrain;
  std::vector<Document> documents;
};

struct TextLimits {
  std::size_t max_sentence_tokens = 100;
  std::size_t max_sentences = 64;
  std::size_t max_vocab = 30000;
};

// Most frequent article tokens up to `max_size` entries including PAD/UNK;
// frequency ties are broken lexicographically.
Vocabulary build_vocab(const Corpus& corpus, std::size_t max_size);

// Caps the document at limits.max_sentences (labels follow) and fills
// `sentences` with token ids, each truncated to limits.max_sentence_tokens.
void index_document(Document& doc, const Vocabulary& vocab, const TextLimits& limits);
void index_corpus(Corpus& corpus, const Vocabulary& vocab, const TextLimits& limits);

// Checks document invariants; throws ValidationError naming the document.
void validate_document(const Document& doc);

Document parse_document(std::string_view line, std::size_t line_number);
std::string format_document(const Document& doc);

// One JSON record per line: {"id", "sentences", "highlights", "labels"?}.
Corpus load_corpus(const std::filesystem::path& path, Split split = Split::kTrain);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

}  // namespace hmn
