#ifndef DSARI_CORPUS_STATS_HPP
#define DSARI_CORPUS_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dsari/dataset.hpp"
#include "dsari/errors.hpp"
#include "dsari/textcore.hpp"

namespace dsari {

/// Occurrence counts of one token in two corpora: y_t^i and y_t^j plus the
/// corpus sizes n^i and n^j (total tokens per side).
struct TokenCounts {
  std::string token;
  std::uint64_t count_i = 0;
  std::uint64_t count_j = 0;
  std::uint64_t size_i = 1;
  std::uint64_t size_j = 1;
};

struct ChiSquare {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Chi-square test of independence on the 2x2 table [[a, b], [c, d]], one
/// degree of freedom. The Yates correction moves each observed cell toward
/// its expected value by min(0.5, |obs - exp|), the same adjustment
/// scipy.stats.chi2_contingency applies, so exactly proportional tables
/// score p = 1 with or without the correction. Degenerate margins (an empty
/// row or column) yield statistic 0, p 1.
inline ChiSquare chi_square_2x2(double a, double b, double c, double d,
                                bool yates = true) {
  const double row1 = a + b;
  const double row2 = c + d;
  const double col1 = a + c;
  const double col2 = b + d;
  const double n = row1 + row2;
  if (row1 <= 0.0 || row2 <= 0.0 || col1 <= 0.0 || col2 <= 0.0) {
    return {0.0, 1.0};
  }
  const double expected[4] = {row1 * col1 / n, row1 * col2 / n,
                              row2 * col1 / n, row2 * col2 / n};
  double observed[4] = {a, b, c, d};
  if (yates) {
    for (int k = 0; k < 4; ++k) {
      const double diff = expected[k] - observed[k];
      const double magnitude = std::min(0.5, std::abs(diff));
      observed[k] += magnitude * (diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0));
    }
  }
  double stat = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double diff = observed[k] - expected[k];
    stat += diff * diff / expected[k];
  }
  // survival function of chi-square with one degree of freedom
  return {stat, std::erfc(std::sqrt(stat / 2.0))};
}

/// Odds ratio (y_i / y_j) / (n_i / n_j) with a chi-square p-value from the
/// contingency table [[y_i, n_i - y_i], [y_j, n_j - y_j]]. ratio is +inf
/// when count_j is 0 (batch output reports such tokens as undefined).
struct OddsRatioResult {
  TokenCounts counts;
  double ratio = 0.0;
  double p_value = 1.0;

  bool undefined() const { return !std::isfinite(ratio); }
};

inline OddsRatioResult odds_ratio(const TokenCounts& counts, bool yates = true) {
  if (counts.count_j == 0) {
    throw ZeroDenominatorError("odds ratio undefined: token \"" + counts.token +
                               "\" does not occur in corpus j");
  }
  OddsRatioResult result;
  result.counts = counts;
  const double yi = static_cast<double>(counts.count_i);
  const double yj = static_cast<double>(counts.count_j);
  const double ni = static_cast<double>(counts.size_i);
  const double nj = static_cast<double>(counts.size_j);
  result.ratio = (yi / yj) / (ni / nj);
  result.p_value =
      chi_square_2x2(yi, ni - yi, yj, nj - yj, yates).p_value;
  return result;
}

/// Per-token occurrence counts over a corpus side; the corpus size is the
/// total token count. Merging is additive, so sharding the pass over
/// workers cannot change the result.
inline std::unordered_map<std::string, std::uint64_t> count_tokens(
    std::span<const Document> corpus, std::uint64_t& total) {
  std::unordered_map<std::string, std::uint64_t> counts;
  total = 0;
  for (const auto& doc : corpus) {
    for (const auto& token : doc.tokens()) {
      ++counts[token];
      ++total;
    }
  }
  return counts;
}

/// Counts every token on both sides, drops tokens with max(y_i, y_j) below
/// min_count, and ranks the rest ascending by ratio. Tokens absent from
/// corpus j come last with ratio +inf (their p-value is still computed).
inline std::vector<OddsRatioResult> batch_odds_ratios(
    std::span<const Document> corpus_i, std::span<const Document> corpus_j,
    std::uint64_t min_count = 20, bool yates = true) {
  std::uint64_t size_i = 0;
  std::uint64_t size_j = 0;
  const auto counts_i = count_tokens(corpus_i, size_i);
  const auto counts_j = count_tokens(corpus_j, size_j);

  std::vector<OddsRatioResult> results;
  auto consider = [&](const std::string& token, std::uint64_t yi, std::uint64_t yj) {
    if (std::max(yi, yj) < min_count) return;
    TokenCounts counts{token, yi, yj, std::max<std::uint64_t>(size_i, 1),
                       std::max<std::uint64_t>(size_j, 1)};
    if (yj == 0) {
      OddsRatioResult result;
      result.counts = counts;
      result.ratio = std::numeric_limits<double>::infinity();
      result.p_value = chi_square_2x2(static_cast<double>(yi),
                                      static_cast<double>(size_i - yi),
                                      0.0, static_cast<double>(size_j), yates)
                           .p_value;
      results.push_back(std::move(result));
    } else {
      results.push_back(odds_ratio(counts, yates));
    }
  };
  for (const auto& [token, yi] : counts_i) {
    auto it = counts_j.find(token);
    consider(token, yi, it == counts_j.end() ? 0 : it->second);
  }
  for (const auto& [token, yj] : counts_j) {
    if (!counts_i.count(token)) consider(token, 0, yj);
  }

  std::sort(results.begin(), results.end(),
            [](const OddsRatioResult& a, const OddsRatioResult& b) {
              if (a.ratio != b.ratio) return a.ratio < b.ratio;
              return a.counts.token < b.counts.token;  // stable ordering for ties
            });
  return results;
}

struct CorpusSideStats {
  std::size_t articles = 0;
  std::size_t sentences = 0;
  std::size_t words = 0;
  double avg_words_per_article = 0.0;
  double avg_words_per_sentence = 0.0;
};

/// Aggregate statistics over aligned pairs; compression ratios divide the
/// simple-side average by the original-side average.
struct CorpusReport {
  CorpusSideStats original;
  CorpusSideStats simple;
  double article_compression_ratio = 0.0;
  double sentence_compression_ratio = 0.0;
};

inline CorpusReport corpus_statistics(std::span<const ArticlePair> pairs) {
  if (pairs.empty()) throw EmptyInputError("corpus statistics: no pairs");
  CorpusReport report;
  for (const auto& pair : pairs) {
    report.original.articles += 1;
    report.original.sentences += pair.original.sentence_count();
    report.original.words += pair.original.word_count();
    report.simple.articles += 1;
    report.simple.sentences += pair.simple.sentence_count();
    report.simple.words += pair.simple.word_count();
  }
  auto finish = [](CorpusSideStats& side) {
    side.avg_words_per_article =
        static_cast<double>(side.words) / static_cast<double>(side.articles);
    side.avg_words_per_sentence =
        side.sentences == 0
            ? 0.0
            : static_cast<double>(side.words) / static_cast<double>(side.sentences);
  };
  finish(report.original);
  finish(report.simple);
  report.article_compression_ratio =
      report.simple.avg_words_per_article / report.original.avg_words_per_article;
  report.sentence_compression_ratio =
      report.original.avg_words_per_sentence == 0.0
          ? 0.0
          : report.simple.avg_words_per_sentence / report.original.avg_words_per_sentence;
  return report;
}

/// Spearman's rank correlation: Pearson correlation of fractional
/// (average-tie) ranks. Needs equally long sequences of length >= 3 with at
/// least two distinct values on each side.
inline double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw LengthMismatchError("spearman: sequences have different lengths (" +
                              std::to_string(xs.size()) + " vs " +
                              std::to_string(ys.size()) + ")");
  }
  if (xs.size() < 3) {
    throw DegenerateInputError("spearman: need at least 3 observations");
  }

  auto ranks = [](std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return values[a] < values[b];
    });
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
      i = j + 1;
    }
    return rank;
  };

  auto all_equal = [](std::span<const double> values) {
    for (double v : values) {
      if (v != values.front()) return false;
    }
    return true;
  };
  if (all_equal(xs) || all_equal(ys)) {
    throw DegenerateInputError("spearman: constant sequence has no rank order");
  }

  const auto rx = ranks(xs);
  const auto ry = ranks(ys);
  const double n = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    mean_x += rx[k];
    mean_y += ry[k];
  }
  mean_x /= n;
  mean_y /= n;
  double cov = 0.0;
  double var_x = 0.0;
  double var_y = 0.0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    const double dx = rx[k] - mean_x;
    const double dy = ry[k] - mean_y;
    cov += dx * dy;
    var_x += dx * dx;
    var_y += dy * dy;
  }
  return cov / std::sqrt(var_x * var_y);
}

}  // namespace dsari

#endif  // DSARI_CORPUS_STATS_HPP
