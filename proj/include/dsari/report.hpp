#ifndef DSARI_REPORT_HPP
#define DSARI_REPORT_HPP

#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dsari/bleu.hpp"
#include "dsari/dataset.hpp"
#include "dsari/dsari.hpp"
#include "dsari/errors.hpp"
#include "dsari/readability.hpp"
#include "dsari/sari.hpp"
#include "dsari/textcore.hpp"
#include "dsari/version.hpp"

namespace dsari {

/// Compensated (Kahan) accumulator; keeps corpus means stable under long
/// streams and a fixed summation order.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - compensation_;
    const double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

struct MetricSelection {
  bool dsari = true;
  bool sari = true;
  bool bleu = true;
  bool fkgl = true;
};

enum class ReportFormat { kStruct, kTable };

struct EvalOptions {
  MetricSelection metrics;
  bool lowercase = false;
  bool bleu_smoothing = false;
  bool include_timestamp = true;
  ReportFormat format = ReportFormat::kStruct;
};

/// One evaluated triple. The D-SARI record carries the full penalty
/// breakdown (lp1, lp2, slp) so every reported score can be audited.
struct PairRecord {
  std::int64_t pair_id = 0;
  LengthProfile lengths;
  SariComponents sari;
  DsariComponents dsari;
  BleuScore bleu;
  ReadabilityScore readability;
};

/// Macro-averages over per-pair values, accumulated in pair-id order with
/// compensated summation.
struct Aggregate {
  std::size_t pairs = 0;
  double sari = 0.0, f_keep = 0.0, p_del = 0.0, f_add = 0.0;
  double d_sari = 0.0, d_keep = 0.0, d_del = 0.0, d_add = 0.0;
  double lp1 = 0.0, lp2 = 0.0, slp = 0.0;
  double bleu = 0.0;
  double fkgl = 0.0;
};

struct FileStamp {
  std::string path;
  std::string digest;  // fnv1a64 of the raw bytes
};

struct EvaluationReport {
  std::string version = kVersion;
  std::string timestamp;  // empty when suppressed
  FileStamp input_file;
  FileStamp output_file;
  FileStamp reference_file;
  std::vector<PairRecord> pairs;
  Aggregate aggregate;
};

namespace detail {

inline std::string fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buffer[1 << 16];
  while (in.read(buffer, sizeof buffer) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize k = 0; k < got; ++k) {
      hash ^= static_cast<unsigned char>(buffer[k]);
      hash *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
  return std::string("fnv1a64:") + hex;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace detail

/// Streams the three line-aligned files and evaluates every triple.
/// Alignment and decoding failures, and per-pair metric errors, raise
/// Error with the offending file and 1-based line number.
inline EvaluationReport evaluate_files(const std::filesystem::path& input_path,
                                       const std::filesystem::path& output_path,
                                       const std::filesystem::path& reference_path,
                                       const EvalOptions& options) {
  std::ifstream input(input_path, std::ios::binary);
  if (!input) throw Error("cannot open " + input_path.string());
  std::ifstream output(output_path, std::ios::binary);
  if (!output) throw Error("cannot open " + output_path.string());
  std::ifstream reference(reference_path, std::ios::binary);
  if (!reference) throw Error("cannot open " + reference_path.string());

  EvaluationReport report;
  report.input_file = {input_path.string(), detail::fnv1a64_file(input_path)};
  report.output_file = {output_path.string(), detail::fnv1a64_file(output_path)};
  report.reference_file = {reference_path.string(),
                           detail::fnv1a64_file(reference_path)};
  if (options.include_timestamp) report.timestamp = detail::utc_timestamp();

  KahanSum sari_sum, keep_sum, del_sum, add_sum;
  KahanSum dsari_sum, dkeep_sum, ddel_sum, dadd_sum, lp1_sum, lp2_sum, slp_sum;
  KahanSum bleu_sum, fkgl_sum;

  std::string input_line, output_line, reference_line;
  std::int64_t line_no = 0;
  while (true) {
    const bool got_input = static_cast<bool>(std::getline(input, input_line));
    const bool got_output = static_cast<bool>(std::getline(output, output_line));
    const bool got_reference =
        static_cast<bool>(std::getline(reference, reference_line));
    if (!got_input && !got_output && !got_reference) break;
    if (!(got_input && got_output && got_reference)) {
      std::string shorter;
      if (!got_input) shorter = input_path.string();
      else if (!got_output) shorter = output_path.string();
      else shorter = reference_path.string();
      throw LineCountMismatchError(shorter + " ends at line " +
                                   std::to_string(line_no) +
                                   "; the files are not line-aligned");
    }

    auto make_document = [&](std::string& line, const std::filesystem::path& path) {
      detail::strip_trailing_cr(line);
      if (!detail::is_valid_utf8(line)) {
        throw DecodingError(path.string() + ": invalid UTF-8 at line " +
                            std::to_string(line_no + 1));
      }
      return options.lowercase ? tokenize(ascii_lowercase(line)) : tokenize(line);
    };

    PairRecord record;
    record.pair_id = line_no;
    EvalTriple triple{make_document(input_line, input_path),
                      make_document(output_line, output_path),
                      make_document(reference_line, reference_path)};
    record.lengths = length_profile(triple);

    try {
      if (options.metrics.dsari) {
        record.dsari = compute_dsari(triple);
        record.sari = record.dsari.base;
      } else if (options.metrics.sari) {
        record.sari = compute_sari(triple);
      }
      if (options.metrics.bleu) {
        record.bleu =
            compute_bleu(triple.output, triple.reference, options.bleu_smoothing);
      }
      if (options.metrics.fkgl) {
        record.readability = compute_fkgl(triple.output);
      }
    } catch (const Error& e) {
      throw Error("line " + std::to_string(line_no + 1) + ": " + e.what());
    }

    sari_sum.add(record.sari.sari);
    keep_sum.add(record.sari.f_keep);
    del_sum.add(record.sari.p_del);
    add_sum.add(record.sari.f_add);
    dsari_sum.add(record.dsari.d_sari);
    dkeep_sum.add(record.dsari.d_keep);
    ddel_sum.add(record.dsari.d_del);
    dadd_sum.add(record.dsari.d_add);
    lp1_sum.add(record.dsari.lp1);
    lp2_sum.add(record.dsari.lp2);
    slp_sum.add(record.dsari.slp);
    bleu_sum.add(record.bleu.score);
    fkgl_sum.add(record.readability.fkgl);

    report.pairs.push_back(std::move(record));
    ++line_no;
  }

  if (report.pairs.empty()) {
    throw EmptyInputError("no evaluation pairs: the files are empty");
  }

  const double n = static_cast<double>(report.pairs.size());
  report.aggregate.pairs = report.pairs.size();
  report.aggregate.sari = sari_sum.value() / n;
  report.aggregate.f_keep = keep_sum.value() / n;
  report.aggregate.p_del = del_sum.value() / n;
  report.aggregate.f_add = add_sum.value() / n;
  report.aggregate.d_sari = dsari_sum.value() / n;
  report.aggregate.d_keep = dkeep_sum.value() / n;
  report.aggregate.d_del = ddel_sum.value() / n;
  report.aggregate.d_add = dadd_sum.value() / n;
  report.aggregate.lp1 = lp1_sum.value() / n;
  report.aggregate.lp2 = lp2_sum.value() / n;
  report.aggregate.slp = slp_sum.value() / n;
  report.aggregate.bleu = bleu_sum.value() / n;
  report.aggregate.fkgl = fkgl_sum.value() / n;
  return report;
}

/// Structured report; key order is fixed so identical inputs and flags
/// serialize byte-identically (modulo the suppressible timestamp).
inline nlohmann::ordered_json report_to_json(const EvaluationReport& report,
                                             const EvalOptions& options) {
  nlohmann::ordered_json root;
  root["tool"] = "dsari";
  root["version"] = report.version;
  if (!report.timestamp.empty()) root["timestamp"] = report.timestamp;
  root["options"] = {
      {"metrics",
       {{"dsari", options.metrics.dsari},
        {"sari", options.metrics.sari},
        {"bleu", options.metrics.bleu},
        {"fkgl", options.metrics.fkgl}}},
      {"lowercase", options.lowercase},
      {"bleu_smoothing", options.bleu_smoothing},
  };
  root["files"] = {
      {"input", {{"path", report.input_file.path}, {"digest", report.input_file.digest}}},
      {"output", {{"path", report.output_file.path}, {"digest", report.output_file.digest}}},
      {"reference",
       {{"path", report.reference_file.path}, {"digest", report.reference_file.digest}}},
  };

  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& record : report.pairs) {
    nlohmann::ordered_json row;
    row["pair_id"] = record.pair_id;
    row["lengths"] = {{"input_words", record.lengths.input_words},
                      {"output_words", record.lengths.output_words},
                      {"reference_words", record.lengths.reference_words},
                      {"output_sentences", record.lengths.output_sentences},
                      {"reference_sentences", record.lengths.reference_sentences}};
    if (options.metrics.sari || options.metrics.dsari) {
      row["sari"] = {{"f_keep", record.sari.f_keep},
                     {"p_del", record.sari.p_del},
                     {"f_add", record.sari.f_add},
                     {"sari", record.sari.sari}};
    }
    if (options.metrics.dsari) {
      row["dsari"] = {{"lp1", record.dsari.lp1},
                      {"lp2", record.dsari.lp2},
                      {"slp", record.dsari.slp},
                      {"d_keep", record.dsari.d_keep},
                      {"d_del", record.dsari.d_del},
                      {"d_add", record.dsari.d_add},
                      {"d_sari", record.dsari.d_sari}};
    }
    if (options.metrics.bleu) {
      row["bleu"] = {{"score", record.bleu.score},
                     {"precisions", record.bleu.precisions},
                     {"brevity_penalty", record.bleu.brevity_penalty}};
    }
    if (options.metrics.fkgl) {
      row["fkgl"] = {{"grade", record.readability.fkgl},
                     {"words", record.readability.words},
                     {"sentences", record.readability.sentences},
                     {"syllables", record.readability.syllables}};
    }
    pairs.push_back(std::move(row));
  }
  root["pairs"] = std::move(pairs);

  nlohmann::ordered_json aggregate;
  aggregate["pairs"] = report.aggregate.pairs;
  if (options.metrics.sari || options.metrics.dsari) {
    aggregate["f_keep"] = report.aggregate.f_keep;
    aggregate["p_del"] = report.aggregate.p_del;
    aggregate["f_add"] = report.aggregate.f_add;
    aggregate["sari"] = report.aggregate.sari;
  }
  if (options.metrics.dsari) {
    aggregate["lp1"] = report.aggregate.lp1;
    aggregate["lp2"] = report.aggregate.lp2;
    aggregate["slp"] = report.aggregate.slp;
    aggregate["d_keep"] = report.aggregate.d_keep;
    aggregate["d_del"] = report.aggregate.d_del;
    aggregate["d_add"] = report.aggregate.d_add;
    aggregate["d_sari"] = report.aggregate.d_sari;
  }
  if (options.metrics.bleu) aggregate["bleu"] = report.aggregate.bleu;
  if (options.metrics.fkgl) aggregate["fkgl"] = report.aggregate.fkgl;
  root["aggregate"] = std::move(aggregate);
  return root;
}

/// Delimited view with two-decimal display rounding; the struct format
/// keeps full precision.
inline std::string report_to_table(const EvaluationReport& report,
                                   const EvalOptions& options) {
  std::string out;
  auto cell = [&](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    out += '\t';
    out += buf;
  };

  out += "pair_id";
  if (options.metrics.sari || options.metrics.dsari)
    out += "\tf_keep\tp_del\tf_add\tsari";
  if (options.metrics.dsari)
    out += "\tlp1\tlp2\tslp\td_keep\td_del\td_add\td_sari";
  if (options.metrics.bleu) out += "\tbleu";
  if (options.metrics.fkgl) out += "\tfkgl";
  out += '\n';

  auto emit = [&](const std::string& id, auto get_sari, auto get_dsari,
                  auto get_bleu, auto get_fkgl) {
    out += id;
    if (options.metrics.sari || options.metrics.dsari) get_sari();
    if (options.metrics.dsari) get_dsari();
    if (options.metrics.bleu) get_bleu();
    if (options.metrics.fkgl) get_fkgl();
    out += '\n';
  };

  for (const auto& r : report.pairs) {
    emit(std::to_string(r.pair_id),
         [&] { cell(r.sari.f_keep); cell(r.sari.p_del); cell(r.sari.f_add); cell(r.sari.sari); },
         [&] {
           cell(r.dsari.lp1); cell(r.dsari.lp2); cell(r.dsari.slp);
           cell(r.dsari.d_keep); cell(r.dsari.d_del); cell(r.dsari.d_add);
           cell(r.dsari.d_sari);
         },
         [&] { cell(r.bleu.score); },
         [&] { cell(r.readability.fkgl); });
  }
  const auto& a = report.aggregate;
  emit("mean",
       [&] { cell(a.f_keep); cell(a.p_del); cell(a.f_add); cell(a.sari); },
       [&] {
         cell(a.lp1); cell(a.lp2); cell(a.slp);
         cell(a.d_keep); cell(a.d_del); cell(a.d_add); cell(a.d_sari);
       },
       [&] { cell(a.bleu); },
       [&] { cell(a.fkgl); });
  return out;
}

}  // namespace dsari

#endif  // DSARI_REPORT_HPP
