#ifndef DSARI_TEXTCORE_HPP
#define DSARI_TEXTCORE_HPP

#include <cassert>
#include <cctype>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dsari {

/// Half-open token index range [begin, end) of one sentence.
struct SentenceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const SentenceSpan&, const SentenceSpan&) = default;
};

inline bool is_sentence_terminal(std::string_view token) {
  return token == "." || token == "!" || token == "?";
}

/// A sentence boundary closes immediately after each standalone ".", "!" or
/// "?" token; trailing tokens after the last terminal form a final sentence.
inline std::vector<SentenceSpan> segment_sentences(
    std::span<const std::string> tokens) {
  std::vector<SentenceSpan> spans;
  std::size_t start = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (is_sentence_terminal(tokens[i])) {
      spans.push_back({start, i + 1});
      start = i + 1;
    }
  }
  if (start < tokens.size()) {
    spans.push_back({start, tokens.size()});
  }
  return spans;
}

/// Whitespace-tokenized article with derived sentence boundaries. Tokens keep
/// their original bytes; the corpus format is pre-tokenized (punctuation
/// separated by spaces), so no linguistic tokenization happens here.
/// Immutable after construction.
class Document {
 public:
  Document() = default;

  explicit Document(std::vector<std::string> tokens)
      : tokens_(std::move(tokens)), sentences_(segment_sentences(tokens_)) {}

  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<SentenceSpan>& sentences() const { return sentences_; }

  /// Number of tokens, punctuation included.
  std::size_t word_count() const { return tokens_.size(); }
  std::size_t sentence_count() const { return sentences_.size(); }
  bool empty() const { return tokens_.empty(); }

  std::span<const std::string> sentence(std::size_t i) const {
    assert(i < sentences_.size());
    const auto& s = sentences_[i];
    return std::span<const std::string>(tokens_).subspan(s.begin, s.size());
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<SentenceSpan> sentences_;
};

/// Tokens are the maximal non-whitespace runs of the input, in order.
/// Empty or whitespace-only input yields an empty Document.
inline Document tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    if (i > start) {
      tokens.emplace_back(text.substr(start, i - start));
    }
  }
  return Document(std::move(tokens));
}

inline std::size_t word_count(const Document& doc) { return doc.word_count(); }

/// ASCII lowercasing; bytes outside A-Z pass through untouched.
inline std::string ascii_lowercase(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
  }
  return out;
}

/// Multiset of contiguous n-token windows. Keys are the window's tokens
/// joined with single spaces; tokens never contain whitespace, so the join
/// is unambiguous.
struct NGramMultiset {
  int order = 1;
  std::unordered_map<std::string, int> counts;

  std::size_t total() const {
    std::size_t sum = 0;
    for (const auto& entry : counts) sum += static_cast<std::size_t>(entry.second);
    return sum;
  }
};

inline NGramMultiset ngrams(std::span<const std::string> tokens, int order) {
  assert(order >= 1);
  NGramMultiset result;
  result.order = order;
  const std::size_t n = static_cast<std::size_t>(order);
  if (tokens.size() < n) return result;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t k = 1; k < n; ++k) {
      key += ' ';
      key += tokens[i + k];
    }
    ++result.counts[std::move(key)];
  }
  return result;
}

inline NGramMultiset ngrams(const Document& doc, int order) {
  return ngrams(std::span<const std::string>(doc.tokens()), order);
}

}  // namespace dsari

#endif  // DSARI_TEXTCORE_HPP
