#ifndef DSARI_READABILITY_HPP
#define DSARI_READABILITY_HPP

#include <cctype>
#include <cstddef>
#include <string_view>

#include "dsari/errors.hpp"
#include "dsari/textcore.hpp"

namespace dsari {

/// Flesch-Kincaid grade level (may be negative for very simple text).
/// Unlike the simplification metrics, `words` here excludes tokens that
/// carry no alphanumeric character; the two counting rules genuinely differ.
struct ReadabilityScore {
  double fkgl = 0.0;
  std::size_t words = 0;
  std::size_t sentences = 0;
  std::size_t syllables = 0;
};

inline bool is_fkgl_word(std::string_view token) {
  for (char c : token) {
    if (std::isalnum(static_cast<unsigned char>(c))) return true;
  }
  return false;
}

/// Heuristic syllable count: number of maximal vowel-group runs over the
/// word's alphabetic characters (vowels a e i o u y, case-insensitive),
/// minus one for a terminal silent "e" when more than one group exists;
/// never below 1. Tokens without letters count as one syllable.
inline int count_syllables(std::string_view word) {
  auto is_letter = [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0;
  };
  auto is_vowel = [](char c) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
  };

  int groups = 0;
  bool in_group = false;
  char last_letter = '\0';
  for (char c : word) {
    if (!is_letter(c)) {
      in_group = false;
      continue;
    }
    last_letter = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (is_vowel(c)) {
      if (!in_group) ++groups;
      in_group = true;
    } else {
      in_group = false;
    }
  }
  if (groups > 1 && last_letter == 'e') --groups;
  return groups < 1 ? 1 : groups;
}

/// FKGL = 0.39 * words/sentences + 11.8 * syllables/words - 15.59.
/// Requires at least one sentence and one countable word.
inline ReadabilityScore compute_fkgl(const Document& doc) {
  ReadabilityScore result;
  result.sentences = doc.sentence_count();
  for (const auto& token : doc.tokens()) {
    if (!is_fkgl_word(token)) continue;
    ++result.words;
    result.syllables += static_cast<std::size_t>(count_syllables(token));
  }
  if (result.sentences == 0 || result.words == 0) {
    throw EmptyDocumentError("FKGL: document has no sentence or no countable word");
  }
  const double w = static_cast<double>(result.words);
  const double s = static_cast<double>(result.sentences);
  const double y = static_cast<double>(result.syllables);
  result.fkgl = 0.39 * (w / s) + 11.8 * (y / w) - 15.59;
  return result;
}

}  // namespace dsari

#endif  // DSARI_READABILITY_HPP
