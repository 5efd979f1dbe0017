#include "dsari/sari.hpp"

#include <cmath>

#include "catch2/catch_amalgamated.hpp"
#include "test_support.hpp"

using dsari::compute_sari;
using dsari::EvalTriple;
using dsari::tokenize;

namespace {

EvalTriple marengo_triple(int article) {
  const auto dir = testsupport::data_dir() / "marengo";
  EvalTriple triple;
  triple.input = tokenize(testsupport::read_line(dir / "input.txt"));
  triple.output = tokenize(
      testsupport::read_line(dir / ("output" + std::to_string(article) + ".txt")));
  triple.reference = tokenize(testsupport::read_line(dir / "reference.txt"));
  return triple;
}

}  // namespace

TEST_CASE("marengo articles reproduce the published component values", "[sari]") {
  struct Expected {
    int article;
    double f_keep, p_del, f_add, sari;
  };
  const Expected table[] = {
      {1, 23.74, 88.18, 50.80, 54.24},
      {2, 33.68, 98.08, 62.95, 64.90},
      {3, 67.63, 96.44, 36.33, 66.80},
      {4, 51.39, 91.25, 7.14, 49.93},
  };
  for (const auto& row : table) {
    CAPTURE(row.article);
    const auto got = compute_sari(marengo_triple(row.article));
    CHECK_THAT(got.f_keep, Catch::Matchers::WithinAbs(row.f_keep, 0.01));
    CHECK_THAT(got.p_del, Catch::Matchers::WithinAbs(row.p_del, 0.01));
    CHECK_THAT(got.f_add, Catch::Matchers::WithinAbs(row.f_add, 0.01));
    CHECK_THAT(got.sari, Catch::Matchers::WithinAbs(row.sari, 0.01));
  }
}

TEST_CASE("sari matches the frozen reference-script fixtures", "[sari]") {
  const auto fixtures = testsupport::load_json("sari_fixtures.json");
  REQUIRE(fixtures.size() == 100);
  for (const auto& fix : fixtures) {
    EvalTriple triple{tokenize(fix["input"].get<std::string>()),
                      tokenize(fix["output"].get<std::string>()),
                      tokenize(fix["reference"].get<std::string>())};
    const auto got = compute_sari(triple);
    // fixtures hold pre-scaling values in [0, 1]
    CHECK_THAT(got.f_keep / 100.0,
               Catch::Matchers::WithinAbs(fix["f_keep"].get<double>(), 1e-6));
    CHECK_THAT(got.p_del / 100.0,
               Catch::Matchers::WithinAbs(fix["p_del"].get<double>(), 1e-6));
    CHECK_THAT(got.f_add / 100.0,
               Catch::Matchers::WithinAbs(fix["f_add"].get<double>(), 1e-6));
    CHECK_THAT(got.sari / 100.0,
               Catch::Matchers::WithinAbs(fix["sari"].get<double>(), 1e-6));
  }
}

TEST_CASE("copying the input adds nothing", "[sari]") {
  EvalTriple triple;
  triple.input = tokenize("a b c d e f");
  triple.output = triple.input;
  triple.reference = tokenize("a b c d");  // strict subsequence
  CHECK(compute_sari(triple).f_add == 0.0);
}

TEST_CASE("empty input or reference is rejected, empty output is not", "[sari]") {
  EvalTriple triple;
  triple.input = tokenize("a b");
  triple.output = tokenize("a");
  triple.reference = tokenize("a");
  CHECK_NOTHROW(compute_sari(triple));

  triple.output = dsari::Document();
  const auto components = compute_sari(triple);
  CHECK(components.f_add == 0.0);

  auto missing_input = triple;
  missing_input.input = dsari::Document();
  CHECK_THROWS_AS(compute_sari(missing_input), dsari::EmptyInputError);

  auto missing_reference = triple;
  missing_reference.reference = dsari::Document();
  CHECK_THROWS_AS(compute_sari(missing_reference), dsari::EmptyReferenceError);
}

TEST_CASE("components stay in range and the mean is exact", "[sari]") {
  testsupport::TripleGenerator gen(404);
  for (int iter = 0; iter < 400; ++iter) {
    const auto triple = gen.triple();
    const auto got = compute_sari(triple);
    REQUIRE(got.f_keep >= 0.0);
    REQUIRE(got.f_keep <= 100.0);
    REQUIRE(got.p_del >= 0.0);
    REQUIRE(got.p_del <= 100.0);
    REQUIRE(got.f_add >= 0.0);
    REQUIRE(got.f_add <= 100.0);
    REQUIRE(got.sari >= 0.0);
    REQUIRE(got.sari <= 100.0);
    // bit-for-bit reconstruction from the stored components
    REQUIRE(got.sari == (got.f_keep + got.p_del + got.f_add) / 3.0);
  }
}
