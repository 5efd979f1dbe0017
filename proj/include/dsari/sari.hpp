#ifndef DSARI_SARI_HPP
#define DSARI_SARI_HPP

#include <string>
#include <unordered_map>
#include <unordered_set>

#include "dsari/errors.hpp"
#include "dsari/textcore.hpp"

namespace dsari {

/// One (input, system output, reference) unit of metric evaluation.
/// The whole article token sequence is the segment; there is no
/// per-sentence alignment.
struct EvalTriple {
  Document input;
  Document output;
  Document reference;
};

/// SARI breakdown, all scores in [0, 100]. sari is the uniform mean of the
/// three components, computed from the stored (scaled) values so that
/// recomputing it from the struct reproduces it bit for bit.
struct SariComponents {
  double f_keep = 0.0;
  double p_del = 0.0;
  double f_add = 0.0;
  double sari = 0.0;
};

namespace detail {

using CountMap = std::unordered_map<std::string, int>;

/// Multiset min-intersection; keys present in both maps only.
inline CountMap intersect(const CountMap& a, const CountMap& b) {
  CountMap out;
  const CountMap& small = a.size() <= b.size() ? a : b;
  const CountMap& large = a.size() <= b.size() ? b : a;
  for (const auto& [gram, count] : small) {
    auto it = large.find(gram);
    if (it != large.end()) {
      out.emplace(gram, count < it->second ? count : it->second);
    }
  }
  return out;
}

/// Saturating multiset subtraction a - b; non-positive entries dropped.
inline CountMap subtract(const CountMap& a, const CountMap& b) {
  CountMap out;
  for (const auto& [gram, count] : a) {
    auto it = b.find(gram);
    const int rest = it == b.end() ? count : count - it->second;
    if (rest > 0) out.emplace(gram, rest);
  }
  return out;
}

inline double f_measure(double precision, double recall) {
  if (precision <= 0.0 && recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

struct OrderScores {
  double keep = 0.0;
  double del = 0.0;
  double add = 0.0;
};

/// Component arithmetic for one n-gram order, matching the original SARI
/// script (github.com/cocoxu/simplification) at one reference:
///   keep   F-measure over per-type clipped count ratios,
///   delete per-type precision alone,
///   add    F-measure over distinct n-grams.
/// Any empty candidate or reference set scores 0 for that order.
inline OrderScores score_order(const CountMap& input, const CountMap& output,
                               const CountMap& reference) {
  OrderScores scores;

  // keep: n-grams retained from the input, judged against input∩reference
  const CountMap keep = intersect(input, output);
  const CountMap keep_good = intersect(keep, reference);
  const CountMap keep_all = intersect(input, reference);
  double keep_p_sum = 0.0;
  double keep_r_sum = 0.0;
  for (const auto& [gram, good] : keep_good) {
    keep_p_sum += static_cast<double>(good) / keep.at(gram);
    keep_r_sum += static_cast<double>(good) / keep_all.at(gram);
  }
  const double keep_p = keep.empty() ? 0.0 : keep_p_sum / keep.size();
  const double keep_r = keep_all.empty() ? 0.0 : keep_r_sum / keep_all.size();
  scores.keep = f_measure(keep_p, keep_r);

  // delete: n-grams dropped from the input; precision only
  const CountMap del = subtract(input, output);
  const CountMap del_good = subtract(del, reference);
  double del_p_sum = 0.0;
  for (const auto& [gram, good] : del_good) {
    del_p_sum += static_cast<double>(good) / del.at(gram);
  }
  scores.del = del.empty() ? 0.0 : del_p_sum / del.size();

  // add: distinct n-grams introduced by the output, judged against the
  // distinct n-grams the reference introduces
  std::size_t added = 0;
  std::size_t added_good = 0;
  for (const auto& [gram, count] : output) {
    if (input.count(gram)) continue;
    ++added;
    if (reference.count(gram)) ++added_good;
  }
  std::size_t addable = 0;
  for (const auto& [gram, count] : reference) {
    if (!input.count(gram)) ++addable;
  }
  const double add_p = added == 0 ? 0.0 : static_cast<double>(added_good) / added;
  const double add_r = addable == 0 ? 0.0 : static_cast<double>(added_good) / addable;
  scores.add = f_measure(add_p, add_r);

  return scores;
}

}  // namespace detail

/// Whole-article SARI over n-gram orders 1..4, uniform mean per component,
/// scaled to [0, 100]. Single reference. The output may be empty; the input
/// and reference may not.
inline SariComponents compute_sari(const EvalTriple& triple) {
  if (triple.input.empty()) {
    throw EmptyInputError("SARI: input document is empty");
  }
  if (triple.reference.empty()) {
    throw EmptyReferenceError("SARI: reference document is empty");
  }

  double keep_sum = 0.0;
  double del_sum = 0.0;
  double add_sum = 0.0;
  for (int order = 1; order <= 4; ++order) {
    const auto scores = detail::score_order(ngrams(triple.input, order).counts,
                                            ngrams(triple.output, order).counts,
                                            ngrams(triple.reference, order).counts);
    keep_sum += scores.keep;
    del_sum += scores.del;
    add_sum += scores.add;
  }

  SariComponents result;
  result.f_keep = keep_sum / 4.0 * 100.0;
  result.p_del = del_sum / 4.0 * 100.0;
  result.f_add = add_sum / 4.0 * 100.0;
  result.sari = (result.f_keep + result.p_del + result.f_add) / 3.0;
  return result;
}

}  // namespace dsari

#endif  // DSARI_SARI_HPP
