// End-to-end checks of the dsari binary: exit codes, report shapes, and
// determinism, driven through popen.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "json.hpp"
#include "test_support.hpp"

using testsupport::TempDir;
using testsupport::write_lines;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const std::string command = std::string(DSARI_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = ::popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  std::array<char, 4096> buffer;
  std::size_t got = 0;
  while ((got = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), got);
  }
  const int status = ::pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string marengo(const std::string& name) {
  return (testsupport::data_dir() / "marengo" / name).string();
}

}  // namespace

TEST_CASE("evaluate reproduces the marengo aggregate", "[cli]") {
  const auto result = run_cli("evaluate " + marengo("input.txt") + " " +
                              marengo("output4.txt") + " " +
                              marengo("reference.txt") + " --no-timestamp");
  REQUIRE(result.exit_code == 0);
  const auto json = nlohmann::json::parse(result.output);
  CHECK_THAT(json["aggregate"]["d_sari"].get<double>(),
             Catch::Matchers::WithinAbs(48.69, 0.05));
  CHECK_THAT(json["aggregate"]["sari"].get<double>(),
             Catch::Matchers::WithinAbs(49.93, 0.05));
  CHECK(json["pairs"][0]["lengths"]["input_words"] == 55);
}

TEST_CASE("evaluate emits a two-decimal table on request", "[cli]") {
  const auto result = run_cli("evaluate " + marengo("input.txt") + " " +
                              marengo("output1.txt") + " " +
                              marengo("reference.txt") +
                              " --format table --no-timestamp");
  REQUIRE(result.exit_code == 0);
  CHECK(result.output.find("pair_id\t") == 0);
  CHECK(result.output.find("16.49") != std::string::npos);  // d_add of article 1
  CHECK(result.output.find("\nmean\t") != std::string::npos);
}

TEST_CASE("identical output and reference score bleu 100", "[cli]") {
  const auto result = run_cli("evaluate " + marengo("input.txt") + " " +
                              marengo("reference.txt") + " " +
                              marengo("reference.txt") + " --no-timestamp");
  REQUIRE(result.exit_code == 0);
  const auto json = nlohmann::json::parse(result.output);
  CHECK(json["aggregate"]["bleu"].get<double>() == 100.0);
  CHECK(json["aggregate"]["lp1"].get<double>() == 1.0);
  CHECK(json["aggregate"]["lp2"].get<double>() == 1.0);
  CHECK(json["aggregate"]["slp"].get<double>() == 1.0);
}

TEST_CASE("misaligned files exit 2 and name the shorter file", "[cli]") {
  TempDir tmp;
  write_lines(tmp.path() / "in.txt", {"a .", "b ."});
  write_lines(tmp.path() / "out.txt", {"a ."});
  write_lines(tmp.path() / "ref.txt", {"a .", "b ."});
  const auto result =
      run_cli("evaluate " + (tmp.path() / "in.txt").string() + " " +
              (tmp.path() / "out.txt").string() + " " +
              (tmp.path() / "ref.txt").string());
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("out.txt") != std::string::npos);
}

TEST_CASE("usage errors exit 1", "[cli]") {
  CHECK(run_cli("evaluate only-one-file").exit_code == 1);
  CHECK(run_cli("no-such-command").exit_code == 1);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("metric selection and --out work through the CLI", "[cli]") {
  TempDir tmp;
  const std::string out_path = (tmp.path() / "report.json").string();
  const auto result = run_cli("evaluate " + marengo("input.txt") + " " +
                              marengo("output3.txt") + " " +
                              marengo("reference.txt") +
                              " --metrics bleu,fkgl --no-timestamp --out " + out_path);
  REQUIRE(result.exit_code == 0);
  CHECK(result.output.empty());
  const auto json = nlohmann::json::parse(testsupport::read_file(out_path));
  CHECK(json["pairs"][0].contains("bleu"));
  CHECK(json["pairs"][0].contains("fkgl"));
  CHECK(!json["pairs"][0].contains("sari"));
  CHECK(!json["aggregate"].contains("d_sari"));

  CHECK(run_cli("evaluate a b c --metrics nonsense").exit_code == 1);
}

TEST_CASE("reports are byte-identical with --no-timestamp", "[cli]") {
  const std::string args = "evaluate " + marengo("input.txt") + " " +
                           marengo("output2.txt") + " " +
                           marengo("reference.txt") + " --no-timestamp";
  const auto first = run_cli(args);
  const auto second = run_cli(args);
  REQUIRE(first.exit_code == 0);
  CHECK(first.output == second.output);
}

TEST_CASE("stats reports both sides and the ratios", "[cli]") {
  TempDir tmp;
  write_lines(tmp.path() / "o.txt", {"a b c d . e f .", "g h i j ."});
  write_lines(tmp.path() / "s.txt", {"a b . c .", "g h ."});
  const auto result = run_cli("stats " + (tmp.path() / "o.txt").string() + " " +
                              (tmp.path() / "s.txt").string());
  REQUIRE(result.exit_code == 0);
  const auto json = nlohmann::json::parse(result.output);
  CHECK(json["original"]["articles"] == 2);
  CHECK(json["original"]["words"] == 13);
  CHECK(json["simple"]["words"] == 8);
  CHECK_THAT(json["article_compression_ratio"].get<double>(),
             Catch::Matchers::WithinAbs(4.0 / 6.5, 1e-12));

  // identical sides give unit ratios
  const auto same = run_cli("stats " + (tmp.path() / "o.txt").string() + " " +
                            (tmp.path() / "o.txt").string());
  const auto same_json = nlohmann::json::parse(same.output);
  CHECK(same_json["article_compression_ratio"].get<double>() == 1.0);
  CHECK(same_json["sentence_compression_ratio"].get<double>() == 1.0);
}

TEST_CASE("odds-ratio reports requested tokens in order", "[cli]") {
  TempDir tmp;
  std::vector<std::string> side_a(20, "although the city although and");
  std::vector<std::string> side_b(20, "also the the town also also");
  write_lines(tmp.path() / "a.txt", side_a);
  write_lines(tmp.path() / "b.txt", side_b);

  const auto result =
      run_cli("odds-ratio " + (tmp.path() / "a.txt").string() + " " +
              (tmp.path() / "b.txt").string() + " --tokens the,although,missing");
  REQUIRE(result.exit_code == 0);
  const auto json = nlohmann::json::parse(result.output);
  REQUIRE(json["results"].size() == 3);
  // (20/40) / (100/120) = 0.6
  CHECK(json["results"][0]["token"] == "the");
  CHECK_THAT(json["results"][0]["ratio"].get<double>(),
             Catch::Matchers::WithinAbs(0.6, 1e-9));
  CHECK(json["results"][1]["token"] == "although");
  CHECK(json["results"][1]["undefined"] == true);
  CHECK(json["results"][2]["token"] == "missing");

  // identical corpora: every ratio is 1
  const auto same = run_cli("odds-ratio " + (tmp.path() / "a.txt").string() + " " +
                            (tmp.path() / "a.txt").string() + " --all --min-count 1");
  const auto same_json = nlohmann::json::parse(same.output);
  for (const auto& row : same_json["results"]) {
    CHECK_THAT(row["ratio"].get<double>(), Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("odds-ratio table format ranks ascending under --all", "[cli]") {
  TempDir tmp;
  std::vector<std::string> side_a(30, "x x y z shared");
  std::vector<std::string> side_b(30, "x y y z shared");
  write_lines(tmp.path() / "a.txt", side_a);
  write_lines(tmp.path() / "b.txt", side_b);
  const auto result =
      run_cli("odds-ratio " + (tmp.path() / "a.txt").string() + " " +
              (tmp.path() / "b.txt").string() +
              " --all --min-count 5 --format table --ranks");
  REQUIRE(result.exit_code == 0);
  CHECK(result.output.find("token\tcount_i\tcount_j\tratio\tp_value\trank_i\trank_j") == 0);
  // y doubled (ratio 0.5) must precede x halved (ratio 2)
  CHECK(result.output.find("\ny\t") < result.output.find("\nx\t"));
}

TEST_CASE("correlate computes spearman per column", "[cli]") {
  TempDir tmp;
  write_lines(tmp.path() / "scores.tsv",
              {"metric_a metric_b", "1 4", "2 3", "3 2", "4 1"});
  write_lines(tmp.path() / "ratings.tsv", {"10", "20", "30", "40"});
  const auto result =
      run_cli("correlate " + (tmp.path() / "scores.tsv").string() + " " +
              (tmp.path() / "ratings.tsv").string() + " --scores-cols 1,2");
  REQUIRE(result.exit_code == 0);
  const auto json = nlohmann::json::parse(result.output);
  REQUIRE(json["results"].size() == 2);
  CHECK(json["results"][0]["column"] == "metric_a");
  CHECK_THAT(json["results"][0]["spearman_rho"].get<double>(),
             Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK_THAT(json["results"][1]["spearman_rho"].get<double>(),
             Catch::Matchers::WithinAbs(-1.0, 1e-12));
}

TEST_CASE("split writes six side files and a manifest", "[cli]") {
  TempDir tmp;
  std::vector<std::string> src, tgt;
  for (int k = 0; k < 10; ++k) {
    src.push_back("orig " + std::to_string(k) + " .");
    tgt.push_back("simp " + std::to_string(k) + " .");
  }
  write_lines(tmp.path() / "all.src", src);
  write_lines(tmp.path() / "all.tgt", tgt);

  const std::string out_dir = (tmp.path() / "splits").string();
  const auto result = run_cli("split " + (tmp.path() / "all.src").string() + " " +
                              (tmp.path() / "all.tgt").string() +
                              " --sizes 6,2,2 --seed 42 --out-dir " + out_dir);
  REQUIRE(result.exit_code == 0);
  const auto json = nlohmann::json::parse(result.output);
  CHECK(json["train"] == 6);
  CHECK(json["valid"] == 2);
  CHECK(json["test"] == 2);
  CHECK(json["leftover_to_train"] == 0);
  for (const char* name : {"train.src", "train.tgt", "valid.src", "valid.tgt",
                           "test.src", "test.tgt", "manifest.tsv"}) {
    CHECK(std::filesystem::exists(std::filesystem::path(out_dir) / name));
  }

  // same seed, same manifest
  const std::string out_dir2 = (tmp.path() / "splits2").string();
  run_cli("split " + (tmp.path() / "all.src").string() + " " +
          (tmp.path() / "all.tgt").string() + " --sizes 6,2,2 --seed 42 --out-dir " +
          out_dir2);
  CHECK(testsupport::read_file(std::filesystem::path(out_dir) / "manifest.tsv") ==
        testsupport::read_file(std::filesystem::path(out_dir2) / "manifest.tsv"));
}
