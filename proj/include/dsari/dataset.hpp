#ifndef DSARI_DATASET_HPP
#define DSARI_DATASET_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dsari/errors.hpp"
#include "dsari/textcore.hpp"

namespace dsari {

/// One aligned article pair; pair_id is the 0-based line number at load.
struct ArticlePair {
  Document original;
  Document simple;
  std::int64_t pair_id = 0;
};

namespace detail {

/// Validates one line of UTF-8; returns false on malformed sequences
/// (overlong forms and truncations included, surrogates excluded).
inline bool is_valid_utf8(std::string_view bytes) {
  std::size_t i = 0;
  while (i < bytes.size()) {
    const unsigned char b0 = static_cast<unsigned char>(bytes[i]);
    std::size_t len;
    std::uint32_t cp;
    if (b0 < 0x80) {
      ++i;
      continue;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      return false;
    }
    if (i + len > bytes.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const unsigned char bk = static_cast<unsigned char>(bytes[i + k]);
      if ((bk & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (bk & 0x3F);
    }
    if (len == 2 && cp < 0x80) return false;
    if (len == 3 && cp < 0x800) return false;
    if (len == 4 && cp < 0x10000) return false;
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += len;
  }
  return true;
}

inline void strip_trailing_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace detail

/// Loads line-aligned pair files: line k of each side becomes pair_id k.
/// Both files must decode as UTF-8 and have equal line counts.
inline std::vector<ArticlePair> load_pairs(const std::filesystem::path& original_path,
                                           const std::filesystem::path& simple_path) {
  std::ifstream orig(original_path, std::ios::binary);
  if (!orig) throw Error("cannot open " + original_path.string());
  std::ifstream simp(simple_path, std::ios::binary);
  if (!simp) throw Error("cannot open " + simple_path.string());

  std::vector<ArticlePair> pairs;
  std::string orig_line;
  std::string simp_line;
  std::int64_t line_no = 0;
  while (true) {
    const bool got_orig = static_cast<bool>(std::getline(orig, orig_line));
    const bool got_simp = static_cast<bool>(std::getline(simp, simp_line));
    if (!got_orig && !got_simp) break;
    if (got_orig != got_simp) {
      const auto& shorter = got_orig ? simple_path : original_path;
      throw LineCountMismatchError(shorter.string() + " ends at line " +
                                   std::to_string(line_no) +
                                   "; the files are not line-aligned");
    }
    detail::strip_trailing_cr(orig_line);
    detail::strip_trailing_cr(simp_line);
    if (!detail::is_valid_utf8(orig_line)) {
      throw DecodingError(original_path.string() + ": invalid UTF-8 at line " +
                          std::to_string(line_no + 1));
    }
    if (!detail::is_valid_utf8(simp_line)) {
      throw DecodingError(simple_path.string() + ": invalid UTF-8 at line " +
                          std::to_string(line_no + 1));
    }
    pairs.push_back({tokenize(orig_line), tokenize(simp_line), line_no});
    ++line_no;
  }
  return pairs;
}

struct LengthFilterResult {
  struct Rejection {
    std::int64_t pair_id = 0;
    std::string reason;
  };
  std::vector<ArticlePair> kept;
  std::vector<Rejection> rejected;
};

/// Drops pairs where either side is longer than max_words (strictly; a side
/// of exactly max_words is kept) and pairs with an empty side. The returned
/// log names each rejection.
inline LengthFilterResult filter_by_length(std::vector<ArticlePair> pairs,
                                           std::size_t max_words = 1000) {
  LengthFilterResult result;
  for (auto& pair : pairs) {
    const std::size_t original_words = pair.original.word_count();
    const std::size_t simple_words = pair.simple.word_count();
    if (original_words == 0 || simple_words == 0) {
      result.rejected.push_back({pair.pair_id, "empty side"});
    } else if (original_words > max_words || simple_words > max_words) {
      result.rejected.push_back(
          {pair.pair_id, "side longer than " + std::to_string(max_words) + " words"});
    } else {
      result.kept.push_back(std::move(pair));
    }
  }
  return result;
}

/// Identity string for the split shuffle; part of the manifest contract so
/// that splits stay reproducible across implementations.
inline constexpr std::string_view kSplitGenerator = "mt19937_64/fisher-yates/v1";

namespace detail {

/// Uniform draw in [0, bound) by rejection sampling; unbiased and fully
/// determined by the mt19937_64 stream.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

/// Back-to-front Fisher-Yates; the loop form is part of the v1 contract.
inline void shuffle_ids(std::vector<std::int64_t>& ids, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = ids.size(); i > 1; --i) {
    const std::uint64_t j = bounded_draw(rng, i);
    std::swap(ids[i - 1], ids[j]);
  }
}

}  // namespace detail

/// Deterministic train/valid/test partition; the three id sets are stored
/// sorted ascending. Ids left over after the three requested prefixes are
/// appended to train and counted in leftover_to_train.
struct DatasetSplit {
  std::vector<std::int64_t> train;
  std::vector<std::int64_t> valid;
  std::vector<std::int64_t> test;
  std::uint64_t seed = 0;
  std::size_t leftover_to_train = 0;
};

inline DatasetSplit split_dataset(std::span<const ArticlePair> pairs,
                                  std::size_t train_n, std::size_t valid_n,
                                  std::size_t test_n, std::uint64_t seed) {
  if (train_n + valid_n + test_n > pairs.size()) {
    throw SizesExceedCorpusError(
        "requested split sizes " + std::to_string(train_n) + "+" +
        std::to_string(valid_n) + "+" + std::to_string(test_n) +
        " exceed corpus size " + std::to_string(pairs.size()));
  }
  std::vector<std::int64_t> ids;
  ids.reserve(pairs.size());
  for (const auto& pair : pairs) ids.push_back(pair.pair_id);
  detail::shuffle_ids(ids, seed);

  DatasetSplit split;
  split.seed = seed;
  split.leftover_to_train = pairs.size() - train_n - valid_n - test_n;
  auto it = ids.begin();
  split.train.assign(it, it + static_cast<std::ptrdiff_t>(train_n));
  it += static_cast<std::ptrdiff_t>(train_n);
  split.valid.assign(it, it + static_cast<std::ptrdiff_t>(valid_n));
  it += static_cast<std::ptrdiff_t>(valid_n);
  split.test.assign(it, it + static_cast<std::ptrdiff_t>(test_n));
  it += static_cast<std::ptrdiff_t>(test_n);
  split.train.insert(split.train.end(), it, ids.end());

  std::sort(split.train.begin(), split.train.end());
  std::sort(split.valid.begin(), split.valid.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

/// Manifest: one header line with seed, sizes, and generator identity,
/// then `pair_id<TAB>split_name` rows sorted by pair id.
inline std::string format_manifest(const DatasetSplit& split) {
  std::ostringstream out;
  out << "# generator=" << kSplitGenerator << " seed=" << split.seed
      << " train=" << split.train.size() << " valid=" << split.valid.size()
      << " test=" << split.test.size()
      << " leftover_to_train=" << split.leftover_to_train << "\n";
  struct Row {
    std::int64_t id;
    const char* name;
  };
  std::vector<Row> rows;
  rows.reserve(split.train.size() + split.valid.size() + split.test.size());
  for (auto id : split.train) rows.push_back({id, "train"});
  for (auto id : split.valid) rows.push_back({id, "valid"});
  for (auto id : split.test) rows.push_back({id, "test"});
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return a.id < b.id; });
  for (const auto& row : rows) out << row.id << '\t' << row.name << '\n';
  return out.str();
}

namespace detail {

inline std::string canonical_line(const Document& doc) {
  std::string line;
  for (std::size_t i = 0; i < doc.tokens().size(); ++i) {
    if (i > 0) line += ' ';
    line += doc.tokens()[i];
  }
  return line;
}

}  // namespace detail

/// Writes {train,valid,test}.src / .tgt (articles in ascending pair-id
/// order, tokens joined with single spaces) plus manifest.tsv.
inline void write_split_files(std::span<const ArticlePair> pairs,
                              const DatasetSplit& split,
                              const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::unordered_map<std::int64_t, const ArticlePair*> by_id;
  by_id.reserve(pairs.size());
  for (const auto& pair : pairs) by_id.emplace(pair.pair_id, &pair);

  auto write_side = [&](const std::vector<std::int64_t>& ids,
                        const std::string& name) {
    std::ofstream src(out_dir / (name + ".src"), std::ios::binary);
    std::ofstream tgt(out_dir / (name + ".tgt"), std::ios::binary);
    if (!src || !tgt) throw Error("cannot write split files in " + out_dir.string());
    for (auto id : ids) {
      const ArticlePair* pair = by_id.at(id);
      src << detail::canonical_line(pair->original) << '\n';
      tgt << detail::canonical_line(pair->simple) << '\n';
    }
  };
  write_side(split.train, "train");
  write_side(split.valid, "valid");
  write_side(split.test, "test");

  std::ofstream manifest(out_dir / "manifest.tsv", std::ios::binary);
  if (!manifest) throw Error("cannot write manifest in " + out_dir.string());
  manifest << format_manifest(split);
}

}  // namespace dsari

#endif  // DSARI_DATASET_HPP
