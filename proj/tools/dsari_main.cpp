// dsari -- document-level text simplification evaluation toolkit.
//
// Subcommands:
//   evaluate    SARI / D-SARI / BLEU / FKGL over line-aligned triples
//   stats       corpus statistics and compression ratios for aligned pairs
//   odds-ratio  per-token odds ratios with chi-square significance
//   correlate   Spearman rank correlation between score columns
//   split       deterministic train/valid/test split of a pair corpus
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dsari/corpus_stats.hpp"
#include "dsari/dataset.hpp"
#include "dsari/report.hpp"
#include "dsari/version.hpp"

namespace {

using nlohmann::ordered_json;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw dsari::Error("cannot write " + out_path);
  out << text;
}

std::string two_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

dsari::MetricSelection parse_metrics(const std::string& list) {
  dsari::MetricSelection metrics{false, false, false, false};
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name == "dsari") metrics.dsari = true;
    else if (name == "sari") metrics.sari = true;
    else if (name == "bleu") metrics.bleu = true;
    else if (name == "fkgl") metrics.fkgl = true;
    else throw CLI::ValidationError("--metrics", "unknown metric \"" + name + "\"");
  }
  if (!metrics.dsari && !metrics.sari && !metrics.bleu && !metrics.fkgl) {
    throw CLI::ValidationError("--metrics", "no metric selected");
  }
  return metrics;
}

/// One Document per line; blank lines become empty documents.
std::vector<dsari::Document> load_corpus(const std::string& path, bool lowercase) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dsari::Error("cannot open " + path);
  std::vector<dsari::Document> docs;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!dsari::detail::is_valid_utf8(line)) {
      throw dsari::DecodingError(path + ": invalid UTF-8 at line " +
                                 std::to_string(line_no));
    }
    docs.push_back(lowercase ? dsari::tokenize(dsari::ascii_lowercase(line))
                             : dsari::tokenize(line));
  }
  return docs;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string input, output, reference;
  std::string metrics = "dsari,sari,bleu,fkgl";
  std::string format = "struct";
  std::string out_path;
  bool lowercase = false;
  bool bleu_smoothing = false;
  bool no_timestamp = false;
};

void run_evaluate(const EvaluateArgs& args) {
  dsari::EvalOptions options;
  options.metrics = parse_metrics(args.metrics);
  options.lowercase = args.lowercase;
  options.bleu_smoothing = args.bleu_smoothing;
  options.include_timestamp = !args.no_timestamp;
  options.format = args.format == "table" ? dsari::ReportFormat::kTable
                                          : dsari::ReportFormat::kStruct;

  const auto report =
      dsari::evaluate_files(args.input, args.output, args.reference, options);
  if (options.format == dsari::ReportFormat::kTable) {
    write_output(dsari::report_to_table(report, options), args.out_path);
  } else {
    write_output(dsari::report_to_json(report, options).dump(2) + "\n",
                 args.out_path);
  }
}

// ------------------------------------------------------------------- stats

struct StatsArgs {
  std::string original, simple;
  std::string format = "struct";
  std::string out_path;
};

void run_stats(const StatsArgs& args) {
  const auto pairs = dsari::load_pairs(args.original, args.simple);
  const auto report =
      dsari::corpus_statistics(std::span<const dsari::ArticlePair>(pairs));

  if (args.format == "table") {
    std::string out;
    auto side_row = [&](const std::string& name, auto get) {
      out += name;
      out += '\t' + get(report.original) + '\t' + get(report.simple) + '\n';
    };
    side_row("total_articles", [](const dsari::CorpusSideStats& s) {
      return std::to_string(s.articles);
    });
    side_row("total_sentences", [](const dsari::CorpusSideStats& s) {
      return std::to_string(s.sentences);
    });
    side_row("total_words", [](const dsari::CorpusSideStats& s) {
      return std::to_string(s.words);
    });
    side_row("avg_words_per_article", [](const dsari::CorpusSideStats& s) {
      return two_decimals(s.avg_words_per_article);
    });
    out += "article_compression_ratio\t\t" +
           two_decimals(report.article_compression_ratio) + '\n';
    side_row("avg_words_per_sentence", [](const dsari::CorpusSideStats& s) {
      return two_decimals(s.avg_words_per_sentence);
    });
    out += "sentence_compression_ratio\t\t" +
           two_decimals(report.sentence_compression_ratio) + '\n';
    write_output(out, args.out_path);
    return;
  }

  auto side_json = [](const dsari::CorpusSideStats& s) {
    return ordered_json{{"articles", s.articles},
                        {"sentences", s.sentences},
                        {"words", s.words},
                        {"avg_words_per_article", s.avg_words_per_article},
                        {"avg_words_per_sentence", s.avg_words_per_sentence}};
  };
  ordered_json root;
  root["tool"] = "dsari";
  root["version"] = dsari::kVersion;
  root["command"] = "stats";
  root["original"] = side_json(report.original);
  root["simple"] = side_json(report.simple);
  root["article_compression_ratio"] = report.article_compression_ratio;
  root["sentence_compression_ratio"] = report.sentence_compression_ratio;
  write_output(root.dump(2) + "\n", args.out_path);
}

// -------------------------------------------------------------- odds-ratio

struct OddsArgs {
  std::string corpus_a, corpus_b;
  std::string tokens;  // comma list; empty means --all
  bool all = false;
  std::uint64_t min_count = 20;
  bool no_yates = false;
  bool lowercase = false;
  bool ranks = false;
  std::size_t limit = 0;
  std::string format = "struct";
  std::string out_path;
};

/// 1-based competition rank of a count within one corpus side
/// (rank 1 = most frequent; ties share the smallest rank).
class FrequencyRanker {
 public:
  explicit FrequencyRanker(const std::unordered_map<std::string, std::uint64_t>& counts) {
    sorted_.reserve(counts.size());
    for (const auto& entry : counts) sorted_.push_back(entry.second);
    std::sort(sorted_.begin(), sorted_.end(), std::greater<>());
  }
  std::size_t rank(std::uint64_t count) const {
    auto it = std::lower_bound(sorted_.begin(), sorted_.end(), count, std::greater<>());
    return static_cast<std::size_t>(it - sorted_.begin()) + 1;
  }

 private:
  std::vector<std::uint64_t> sorted_;
};

void run_odds_ratio(const OddsArgs& args) {
  if (args.all && !args.tokens.empty()) {
    throw CLI::ValidationError("odds-ratio", "--tokens and --all are exclusive");
  }
  if (!args.all && args.tokens.empty()) {
    throw CLI::ValidationError("odds-ratio", "pass --tokens LIST or --all");
  }

  const auto corpus_a = load_corpus(args.corpus_a, args.lowercase);
  const auto corpus_b = load_corpus(args.corpus_b, args.lowercase);
  if (corpus_a.empty() || corpus_b.empty()) {
    throw dsari::EmptyInputError("odds-ratio: a corpus file is empty");
  }
  const bool yates = !args.no_yates;

  std::uint64_t size_a = 0;
  std::uint64_t size_b = 0;
  const auto counts_a =
      dsari::count_tokens(std::span<const dsari::Document>(corpus_a), size_a);
  const auto counts_b =
      dsari::count_tokens(std::span<const dsari::Document>(corpus_b), size_b);

  std::vector<dsari::OddsRatioResult> rows;
  if (args.all) {
    rows = dsari::batch_odds_ratios(std::span<const dsari::Document>(corpus_a),
                                    std::span<const dsari::Document>(corpus_b),
                                    args.min_count, yates);
    if (args.limit > 0 && rows.size() > args.limit) rows.resize(args.limit);
  } else {
    std::stringstream ss(args.tokens);
    std::string token;
    while (std::getline(ss, token, ',')) {
      if (token.empty()) continue;
      auto it_a = counts_a.find(token);
      auto it_b = counts_b.find(token);
      dsari::TokenCounts counts{token,
                                it_a == counts_a.end() ? 0 : it_a->second,
                                it_b == counts_b.end() ? 0 : it_b->second,
                                std::max<std::uint64_t>(size_a, 1),
                                std::max<std::uint64_t>(size_b, 1)};
      dsari::OddsRatioResult row;
      if (counts.count_j == 0) {
        row.counts = counts;
        row.ratio = std::numeric_limits<double>::infinity();
        row.p_value =
            counts.count_i == 0
                ? 1.0
                : dsari::chi_square_2x2(
                      static_cast<double>(counts.count_i),
                      static_cast<double>(counts.size_i - counts.count_i), 0.0,
                      static_cast<double>(counts.size_j), yates)
                      .p_value;
      } else {
        row = dsari::odds_ratio(counts, yates);
      }
      rows.push_back(std::move(row));
    }
  }

  std::optional<FrequencyRanker> ranker_a;
  std::optional<FrequencyRanker> ranker_b;
  if (args.ranks) {
    ranker_a.emplace(counts_a);
    ranker_b.emplace(counts_b);
  }

  if (args.format == "table") {
    std::string out = "token\tcount_i\tcount_j\tratio\tp_value";
    if (args.ranks) out += "\trank_i\trank_j";
    out += '\n';
    for (const auto& row : rows) {
      out += row.counts.token;
      out += '\t' + std::to_string(row.counts.count_i);
      out += '\t' + std::to_string(row.counts.count_j);
      out += '\t';
      out += row.undefined() ? "undefined" : two_decimals(row.ratio);
      char pbuf[32];
      std::snprintf(pbuf, sizeof pbuf, "%.3g", row.p_value);
      out += '\t';
      out += pbuf;
      if (args.ranks) {
        out += '\t' + std::to_string(ranker_a->rank(row.counts.count_i));
        out += '\t' + std::to_string(ranker_b->rank(row.counts.count_j));
      }
      out += '\n';
    }
    write_output(out, args.out_path);
    return;
  }

  ordered_json root;
  root["tool"] = "dsari";
  root["version"] = dsari::kVersion;
  root["command"] = "odds-ratio";
  root["corpus_i"] = {{"path", args.corpus_a}, {"tokens", size_a}};
  root["corpus_j"] = {{"path", args.corpus_b}, {"tokens", size_b}};
  if (args.all) root["min_count"] = args.min_count;
  root["yates"] = yates;
  ordered_json items = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json item;
    item["token"] = row.counts.token;
    item["count_i"] = row.counts.count_i;
    item["count_j"] = row.counts.count_j;
    if (row.undefined()) {
      item["ratio"] = nullptr;
      item["undefined"] = true;
    } else {
      item["ratio"] = row.ratio;
    }
    item["p_value"] = row.p_value;
    if (args.ranks) {
      item["rank_i"] = ranker_a->rank(row.counts.count_i);
      item["rank_j"] = ranker_b->rank(row.counts.count_j);
    }
    items.push_back(std::move(item));
  }
  root["results"] = std::move(items);
  write_output(root.dump(2) + "\n", args.out_path);
}

// --------------------------------------------------------------- correlate

struct CorrelateArgs {
  std::string scores, ratings;
  std::string scores_cols = "1";
  std::size_t ratings_col = 1;
  std::string format = "struct";
  std::string out_path;
};

struct NumericTable {
  std::vector<std::string> header;           // empty when the file has none
  std::vector<std::vector<double>> columns;  // column-major
};

NumericTable read_numeric_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dsari::Error("cannot open " + path);
  NumericTable table;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream ss(line);
    std::vector<std::string> fields;
    std::string field;
    while (ss >> field) fields.push_back(field);
    if (fields.empty()) continue;

    std::vector<double> values;
    values.reserve(fields.size());
    bool numeric = true;
    for (const auto& f : fields) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(f, &used));
        if (used != f.size()) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
      if (!numeric) break;
    }
    if (!numeric) {
      if (first_content_line) {  // header line
        table.header = fields;
        first_content_line = false;
        continue;
      }
      throw dsari::Error(path + ": non-numeric value at line " +
                         std::to_string(line_no));
    }
    first_content_line = false;
    if (table.columns.empty()) table.columns.resize(values.size());
    if (values.size() != table.columns.size()) {
      throw dsari::Error(path + ": ragged row at line " + std::to_string(line_no));
    }
    for (std::size_t c = 0; c < values.size(); ++c) {
      table.columns[c].push_back(values[c]);
    }
  }
  if (table.columns.empty()) throw dsari::EmptyInputError(path + ": no data rows");
  return table;
}

void run_correlate(const CorrelateArgs& args) {
  const auto scores = read_numeric_table(args.scores);
  const auto ratings = read_numeric_table(args.ratings);
  if (args.ratings_col == 0 || args.ratings_col > ratings.columns.size()) {
    throw CLI::ValidationError("--ratings-col", "column out of range");
  }
  const auto& ys = ratings.columns[args.ratings_col - 1];

  struct Row {
    std::string name;
    double rho;
  };
  std::vector<Row> rows;
  std::stringstream ss(args.scores_cols);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    std::size_t col = 0;
    try {
      col = static_cast<std::size_t>(std::stoul(token));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--scores-cols", "bad column \"" + token + "\"");
    }
    if (col == 0 || col > scores.columns.size()) {
      throw CLI::ValidationError("--scores-cols", "column " + token + " out of range");
    }
    const auto& xs = scores.columns[col - 1];
    const std::string name = col - 1 < scores.header.size()
                                 ? scores.header[col - 1]
                                 : "col" + std::to_string(col);
    rows.push_back({name, dsari::spearman(xs, ys)});
  }

  if (args.format == "table") {
    std::string out = "column\tspearman_rho\n";
    for (const auto& row : rows) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", row.rho);
      out += row.name + '\t' + buf + '\n';
    }
    write_output(out, args.out_path);
    return;
  }

  ordered_json root;
  root["tool"] = "dsari";
  root["version"] = dsari::kVersion;
  root["command"] = "correlate";
  ordered_json items = ordered_json::array();
  for (const auto& row : rows) {
    items.push_back({{"column", row.name}, {"spearman_rho", row.rho}});
  }
  root["results"] = std::move(items);
  write_output(root.dump(2) + "\n", args.out_path);
}

// ------------------------------------------------------------------- split

struct SplitArgs {
  std::string src, tgt;
  std::vector<std::size_t> sizes;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::size_t max_words = 1000;
  std::string format = "struct";
};

void run_split(const SplitArgs& args) {
  if (args.sizes.size() != 3) {
    throw CLI::ValidationError("--sizes", "expected train,valid,test");
  }
  auto pairs = dsari::load_pairs(args.src, args.tgt);
  auto filtered = dsari::filter_by_length(std::move(pairs), args.max_words);
  const auto split =
      dsari::split_dataset(std::span<const dsari::ArticlePair>(filtered.kept),
                           args.sizes[0], args.sizes[1], args.sizes[2], args.seed);
  dsari::write_split_files(std::span<const dsari::ArticlePair>(filtered.kept),
                           split, args.out_dir);
  if (!filtered.rejected.empty()) {
    std::ofstream rej(std::filesystem::path(args.out_dir) / "rejected.tsv",
                      std::ios::binary);
    for (const auto& r : filtered.rejected) {
      rej << r.pair_id << '\t' << r.reason << '\n';
    }
  }

  if (args.format == "table") {
    std::ostringstream out;
    out << "out_dir\t" << args.out_dir << "\nseed\t" << split.seed
        << "\ntrain\t" << split.train.size() << "\nvalid\t" << split.valid.size()
        << "\ntest\t" << split.test.size() << "\nleftover_to_train\t"
        << split.leftover_to_train << "\nrejected\t" << filtered.rejected.size()
        << "\ngenerator\t" << dsari::kSplitGenerator << "\n";
    std::cout << out.str();
    return;
  }
  ordered_json root;
  root["tool"] = "dsari";
  root["version"] = dsari::kVersion;
  root["command"] = "split";
  root["out_dir"] = args.out_dir;
  root["seed"] = split.seed;
  root["generator"] = std::string(dsari::kSplitGenerator);
  root["train"] = split.train.size();
  root["valid"] = split.valid.size();
  root["test"] = split.test.size();
  root["leftover_to_train"] = split.leftover_to_train;
  root["rejected"] = filtered.rejected.size();
  std::cout << root.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"document-level text simplification evaluation toolkit"};
  app.set_version_flag("--version", std::string("dsari ") + dsari::kVersion);
  app.require_subcommand(1);

  EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand(
      "evaluate", "score line-aligned input/output/reference files");
  evaluate->add_option("input", eval_args.input, "original articles, one per line")
      ->required();
  evaluate->add_option("output", eval_args.output, "system output articles")
      ->required();
  evaluate->add_option("reference", eval_args.reference, "reference articles")
      ->required();
  evaluate->add_option("--metrics", eval_args.metrics,
                       "comma list of dsari,sari,bleu,fkgl");
  evaluate->add_flag("--lowercase", eval_args.lowercase,
                     "ASCII-lowercase lines before tokenizing");
  evaluate->add_flag("--bleu-smoothing", eval_args.bleu_smoothing,
                     "add-one smoothing for BLEU orders >= 2");
  evaluate->add_option("--format", eval_args.format, "struct (JSON) or table (TSV)")
      ->check(CLI::IsMember({"struct", "table"}));
  evaluate->add_flag("--no-timestamp", eval_args.no_timestamp,
                     "omit the timestamp so reports are byte-reproducible");
  evaluate->add_option("--out", eval_args.out_path, "write the report here");
  evaluate->callback([&] { run_evaluate(eval_args); });

  StatsArgs stats_args;
  auto* stats =
      app.add_subcommand("stats", "corpus statistics over aligned pair files");
  stats->add_option("original", stats_args.original, "original-side file")->required();
  stats->add_option("simple", stats_args.simple, "simplified-side file")->required();
  stats->add_option("--format", stats_args.format, "struct (JSON) or table (TSV)")
      ->check(CLI::IsMember({"struct", "table"}));
  stats->add_option("--out", stats_args.out_path, "write the report here");
  stats->callback([&] { run_stats(stats_args); });

  OddsArgs odds_args;
  auto* odds = app.add_subcommand("odds-ratio",
                                  "token odds ratios between two corpora");
  odds->add_option("corpus_i", odds_args.corpus_a, "first corpus (numerator)")
      ->required();
  odds->add_option("corpus_j", odds_args.corpus_b, "second corpus (denominator)")
      ->required();
  odds->add_option("--tokens", odds_args.tokens, "comma list of tokens to report");
  odds->add_flag("--all", odds_args.all,
                 "report every token above --min-count, ranked ascending");
  odds->add_option("--min-count", odds_args.min_count,
                   "drop tokens whose max side count is below this (with --all)");
  odds->add_flag("--no-yates", odds_args.no_yates,
                 "disable the Yates continuity correction");
  odds->add_flag("--lowercase", odds_args.lowercase,
                 "ASCII-lowercase lines before tokenizing");
  odds->add_flag("--ranks", odds_args.ranks,
                 "add per-side frequency-rank columns");
  odds->add_option("--limit", odds_args.limit, "keep only the first N rows");
  odds->add_option("--format", odds_args.format, "struct (JSON) or table (TSV)")
      ->check(CLI::IsMember({"struct", "table"}));
  odds->add_option("--out", odds_args.out_path, "write the report here");
  odds->callback([&] { run_odds_ratio(odds_args); });

  CorrelateArgs corr_args;
  auto* correlate = app.add_subcommand(
      "correlate", "Spearman correlation of score columns against ratings");
  correlate->add_option("scores", corr_args.scores, "numeric table of metric scores")
      ->required();
  correlate->add_option("ratings", corr_args.ratings, "numeric table of ratings")
      ->required();
  correlate->add_option("--scores-cols", corr_args.scores_cols,
                        "comma list of 1-based score columns");
  correlate->add_option("--ratings-col", corr_args.ratings_col,
                        "1-based ratings column");
  correlate->add_option("--format", corr_args.format, "struct (JSON) or table (TSV)")
      ->check(CLI::IsMember({"struct", "table"}));
  correlate->add_option("--out", corr_args.out_path, "write the report here");
  correlate->callback([&] { run_correlate(corr_args); });

  SplitArgs split_args;
  auto* split = app.add_subcommand(
      "split", "filter and split an aligned pair corpus deterministically");
  split->add_option("src", split_args.src, "original-side file")->required();
  split->add_option("tgt", split_args.tgt, "simplified-side file")->required();
  split->add_option("--sizes", split_args.sizes, "train,valid,test sizes")
      ->required()
      ->delimiter(',');
  split->add_option("--seed", split_args.seed, "64-bit shuffle seed");
  split->add_option("--out-dir", split_args.out_dir, "output directory")->required();
  split->add_option("--max-words", split_args.max_words,
                    "drop pairs with a side longer than this before splitting");
  split->add_option("--format", split_args.format, "struct (JSON) or table (TSV)")
      ->check(CLI::IsMember({"struct", "table"}));
  split->callback([&] { run_split(split_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const dsari::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
  return 0;
}
