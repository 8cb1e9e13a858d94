#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "spdsim/analysis/compare.hpp"
#include "spdsim/analysis/stats.hpp"
#include "spdsim/diagnostics.hpp"

using namespace spdsim;
using analysis::MetricDef;

TEST_CASE("summary reproduces the textbook confidence interval") {
  // mean 2, sample stddev 1, t(0.975, 2) = 4.302653: halfwidth 2.484
  auto s = analysis::summarize({1, 2, 3});
  CHECK(s.n == 3);
  CHECK(s.mean == doctest::Approx(2.0));
  CHECK(s.stddev == doctest::Approx(1.0));
  REQUIRE(s.ci_defined);
  CHECK(s.ci_halfwidth == doctest::Approx(4.302653 / std::sqrt(3.0)).scale(1).epsilon(1e-3));

  auto single = analysis::summarize({5});
  CHECK(single.n == 1);
  CHECK(single.mean == doctest::Approx(5.0));
  CHECK(!single.ci_defined);

  auto empty = analysis::summarize({});
  CHECK(empty.n == 0);
  CHECK(!empty.ci_defined);
}

TEST_CASE("student-t quantiles match reference values") {
  CHECK(analysis::studentTQuantile(0.975, 2) == doctest::Approx(4.302653).epsilon(1e-5));
  CHECK(analysis::studentTQuantile(0.975, 4) == doctest::Approx(2.776445).epsilon(1e-5));
  CHECK(analysis::studentTQuantile(0.975, 10) == doctest::Approx(2.228139).epsilon(1e-5));
  CHECK(analysis::studentTQuantile(0.95, 5) == doctest::Approx(2.015048).epsilon(1e-5));
  CHECK(analysis::studentTQuantile(0.5, 7) == doctest::Approx(0.0).scale(1).epsilon(1e-9));
  // the cdf inverts the quantile
  CHECK(analysis::studentTCdf(2.228139, 10) == doctest::Approx(0.975).epsilon(1e-6));
  CHECK(analysis::studentTCdf(0, 3) == doctest::Approx(0.5));
  // symmetric tails
  CHECK(analysis::studentTCdf(-1.5, 6) ==
        doctest::Approx(1.0 - analysis::studentTCdf(1.5, 6)).epsilon(1e-12));
}

TEST_CASE("incomplete beta matches closed forms") {
  // I_x(1, 1) = x, I_x(2, 1) = x^2
  CHECK(analysis::incompleteBeta(1, 1, 0.3) == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(analysis::incompleteBeta(2, 1, 0.6) == doctest::Approx(0.36).epsilon(1e-10));
  CHECK(analysis::incompleteBeta(2.5, 3.5, 0.0) == doctest::Approx(0.0));
  CHECK(analysis::incompleteBeta(2.5, 3.5, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("pearson correlation handles exact fits and short input") {
  analysis::Correlation c = analysis::pearson({1, 2, 3, 4}, {1, 2, 3, 4});
  REQUIRE(c.defined);
  CHECK(c.r == doctest::Approx(1.0));
  CHECK(c.p_value == doctest::Approx(0.0).scale(1).epsilon(1e-6));

  auto anti = analysis::pearson({1, 2, 3}, {6, 4, 2});
  REQUIRE(anti.defined);
  CHECK(anti.r == doctest::Approx(-1.0));

  CHECK(!analysis::pearson({1, 2}, {3, 4}).defined);       // n < 3
  CHECK(!analysis::pearson({1, 1, 1}, {1, 2, 3}).defined); // zero variance
}

TEST_CASE("error measures follow their definitions") {
  CHECK(analysis::relativeAbsoluteError(2, 1) == doctest::Approx(0.5));
  CHECK(analysis::relativeAbsoluteError(4, 5) == doctest::Approx(0.25));
  CHECK_THROWS_AS(analysis::relativeAbsoluteError(0, 1), Error);

  // mean of 0.5 and 0.25, as a percentage
  CHECK(analysis::meanAbsolutePercentageError({2, 4}, {1, 5}) == doctest::Approx(37.5));
  CHECK_THROWS_AS(analysis::meanAbsolutePercentageError({1}, {1, 2}), Error);
}

TEST_CASE("speedup is direction aware") {
  CHECK(analysis::speedup(2.0, 1.0, true) == doctest::Approx(2.0));   // lower is better
  CHECK(analysis::speedup(2.0, 4.0, true) == doctest::Approx(0.5));
  CHECK(analysis::speedup(10.0, 20.0, false) == doctest::Approx(2.0)); // higher is better
  CHECK(analysis::speedup(10.0, 5.0, false) == doctest::Approx(0.5));
  CHECK_THROWS_AS(analysis::speedup(0.0, 1.0, true), Error);
}

TEST_CASE("pairwise scores split wins, losses and ties") {
  std::vector<std::string> configs = {"a", "b"};
  std::vector<MetricDef> metrics = {
      {"rt", true}, {"p95", true}, {"x", false}, {"nodes", true}};

  SUBCASE("three wins and one loss give a 75/25 split") {
    std::map<std::string, std::map<std::string, double>> v;
    v["a"] = {{"rt", 1.0}, {"p95", 2.0}, {"x", 9.0}, {"nodes", 4.0}};
    v["b"] = {{"rt", 2.0}, {"p95", 3.0}, {"x", 5.0}, {"nodes", 3.0}};
    auto scores = analysis::pairwiseScores(configs, metrics, v);
    CHECK(scores.at("a") == doctest::Approx(75.0));
    CHECK(scores.at("b") == doctest::Approx(25.0));
  }
  SUBCASE("identical values tie everywhere at 50") {
    std::map<std::string, std::map<std::string, double>> v;
    v["a"] = {{"rt", 1.0}, {"p95", 2.0}, {"x", 9.0}, {"nodes", 4.0}};
    v["b"] = v["a"];
    auto scores = analysis::pairwiseScores(configs, metrics, v);
    CHECK(scores.at("a") == doctest::Approx(50.0));
    CHECK(scores.at("b") == doctest::Approx(50.0));
  }
  SUBCASE("near ties are decided on six significant digits") {
    std::map<std::string, std::map<std::string, double>> v;
    v["a"] = {{"rt", 1.0000001}, {"p95", 2.0}, {"x", 9.0}, {"nodes", 4.0}};
    v["b"] = {{"rt", 1.0000002}, {"p95", 2.0}, {"x", 9.0}, {"nodes", 4.0}};
    auto scores = analysis::pairwiseScores(configs, metrics, v);
    CHECK(scores.at("a") == doctest::Approx(50.0));
  }
  SUBCASE("three configurations still sum to 150") {
    std::vector<std::string> three = {"a", "b", "c"};
    std::map<std::string, std::map<std::string, double>> v;
    v["a"] = {{"rt", 1.0}, {"p95", 1.0}, {"x", 3.0}, {"nodes", 1.0}};
    v["b"] = {{"rt", 2.0}, {"p95", 2.0}, {"x", 2.0}, {"nodes", 2.0}};
    v["c"] = {{"rt", 3.0}, {"p95", 3.0}, {"x", 1.0}, {"nodes", 3.0}};
    auto scores = analysis::pairwiseScores(three, metrics, v);
    CHECK(scores.at("a") + scores.at("b") + scores.at("c") == doctest::Approx(150.0));
    CHECK(scores.at("a") > scores.at("b"));
    CHECK(scores.at("b") > scores.at("c"));
  }
}

TEST_CASE("rounding to significant digits") {
  CHECK(analysis::roundSignificant(123456.789, 6) == doctest::Approx(123457.0));
  CHECK(analysis::roundSignificant(0.0012345678, 6) == doctest::Approx(0.00123457));
  CHECK(analysis::roundSignificant(-9.87654321, 3) == doctest::Approx(-9.88));
  CHECK(analysis::roundSignificant(0.0, 6) == doctest::Approx(0.0));
}
