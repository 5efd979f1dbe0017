#ifndef DSARI_BLEU_HPP
#define DSARI_BLEU_HPP

#include <algorithm>
#include <array>
#include <cmath>

#include "dsari/errors.hpp"
#include "dsari/textcore.hpp"

namespace dsari {

/// BLEU-4 breakdown. score = brevity_penalty * geometric mean of the four
/// modified precisions * 100 whenever every precision is positive; 0
/// otherwise (no smoothing). The whole article is one segment.
struct BleuScore {
  double score = 0.0;
  std::array<double, 4> precisions{};
  double brevity_penalty = 1.0;
};

/// Single-reference BLEU with multiset clipping, following the nltk
/// conventions: precision denominators are clamped to >= 1, an empty
/// output gets brevity penalty 0, and the optional add-one smoothing
/// adds 1 to numerator and denominator for orders >= 2.
inline BleuScore compute_bleu(const Document& output, const Document& reference,
                              bool add_one_smoothing = false) {
  if (reference.empty()) {
    throw EmptyReferenceError("BLEU: reference document is empty");
  }

  BleuScore result;
  for (int order = 1; order <= 4; ++order) {
    const auto out_grams = ngrams(output, order);
    const auto ref_grams = ngrams(reference, order);
    long matched = 0;
    for (const auto& [gram, count] : out_grams.counts) {
      auto it = ref_grams.counts.find(gram);
      if (it != ref_grams.counts.end()) {
        matched += std::min(count, it->second);
      }
    }
    const double total =
        std::max<double>(1.0, static_cast<double>(out_grams.total()));
    if (add_one_smoothing && order >= 2) {
      result.precisions[order - 1] = (static_cast<double>(matched) + 1.0) / (total + 1.0);
    } else {
      result.precisions[order - 1] = static_cast<double>(matched) / total;
    }
  }

  const double c = static_cast<double>(output.word_count());
  const double r = static_cast<double>(reference.word_count());
  if (c == 0.0) {
    result.brevity_penalty = 0.0;
  } else if (c >= r) {
    result.brevity_penalty = 1.0;
  } else {
    result.brevity_penalty = std::exp(1.0 - r / c);
  }

  bool any_zero = result.brevity_penalty == 0.0;
  double log_sum = 0.0;
  for (double p : result.precisions) {
    if (p <= 0.0) {
      any_zero = true;
      break;
    }
    log_sum += std::log(p);
  }
  result.score =
      any_zero ? 0.0 : result.brevity_penalty * std::exp(log_sum / 4.0) * 100.0;
  return result;
}

}  // namespace dsari

#endif  // DSARI_BLEU_HPP
