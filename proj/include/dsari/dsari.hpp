#ifndef DSARI_DSARI_HPP
#define DSARI_DSARI_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>

#include "dsari/sari.hpp"
#include "dsari/textcore.hpp"

namespace dsari {

/// Word counts I, O, R (punctuation included) and sentence counts O_S, R_S
/// driving the three penalty factors.
struct LengthProfile {
  std::size_t input_words = 0;
  std::size_t output_words = 0;
  std::size_t reference_words = 0;
  std::size_t output_sentences = 0;
  std::size_t reference_sentences = 0;
};

inline LengthProfile length_profile(const EvalTriple& triple) {
  return LengthProfile{
      triple.input.word_count(),      triple.output.word_count(),
      triple.reference.word_count(),  triple.output.sentence_count(),
      triple.reference.sentence_count()};
}

/// Short-output penalty on the add score: 1 when O >= R, else e^((O-R)/O).
/// Defined as 0 at O = 0 (the one-sided limit); an empty output earns the
/// maximal penalty.
inline double lp1(std::size_t output_words, std::size_t reference_words) {
  if (output_words >= reference_words) return 1.0;
  if (output_words == 0) return 0.0;
  const double o = static_cast<double>(output_words);
  const double r = static_cast<double>(reference_words);
  return std::exp((o - r) / o);
}

/// Long-output penalty on the keep and delete scores: 1 when O <= R, else
/// e^((R-O)/max(I-R, 1)).
inline double lp2(std::size_t input_words, std::size_t output_words,
                  std::size_t reference_words) {
  if (output_words <= reference_words) return 1.0;
  const double i = static_cast<double>(input_words);
  const double o = static_cast<double>(output_words);
  const double r = static_cast<double>(reference_words);
  return std::exp((r - o) / std::max(i - r, 1.0));
}

/// Sentence-count penalty e^(-|R_S - O_S| / max(R_S, O_S)).
inline double slp(std::size_t output_sentences, std::size_t reference_sentences) {
  assert(output_sentences > 0 || reference_sentences > 0);
  const double os = static_cast<double>(output_sentences);
  const double rs = static_cast<double>(reference_sentences);
  return std::exp(-std::abs(rs - os) / std::max(rs, os));
}

/// D-SARI breakdown: the underlying SARI components, the length profile,
/// the three penalty factors, and the penalized scores.
/// d_sari is the uniform mean of the stored d_* values.
struct DsariComponents {
  SariComponents base;
  LengthProfile lengths;
  double lp1 = 1.0;
  double lp2 = 1.0;
  double slp = 1.0;
  double d_keep = 0.0;
  double d_del = 0.0;
  double d_add = 0.0;
  double d_sari = 0.0;
};

/// d_keep = f_keep * LP2 * SLP, d_del = p_del * LP2, d_add = f_add * LP1.
/// Penalties apply to the raw (unrounded) component values.
inline DsariComponents compute_dsari(const EvalTriple& triple) {
  DsariComponents result;
  result.base = compute_sari(triple);
  result.lengths = length_profile(triple);
  result.lp1 = lp1(result.lengths.output_words, result.lengths.reference_words);
  result.lp2 = lp2(result.lengths.input_words, result.lengths.output_words,
                   result.lengths.reference_words);
  result.slp = slp(result.lengths.output_sentences,
                   result.lengths.reference_sentences);
  result.d_keep = result.base.f_keep * result.lp2 * result.slp;
  result.d_del = result.base.p_del * result.lp2;
  result.d_add = result.base.f_add * result.lp1;
  result.d_sari = (result.d_keep + result.d_del + result.d_add) / 3.0;
  return result;
}

}  // namespace dsari

#endif  // DSARI_DSARI_HPP
