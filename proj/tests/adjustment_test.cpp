#include <cmath>

#include "doctest.h"
#include "spdsim/spd/adjustment.hpp"

using namespace spdsim::spd;

namespace {

// Independent evaluation of the resize formulas, written directly against
// floating point rounding rather than the integer arithmetic used by the
// implementation.
int oracleAbsolute(int goal) { return goal; }

int oracleRelative(int n, int p, int m) {
  if (p > 0) {
    int growth = std::max(static_cast<int>(std::ceil(n * p / 100.0)), m);
    return n + growth;
  }
  int shrink = std::max(static_cast<int>(std::floor(n * -p / 100.0)), -m);
  return std::max(1, n - shrink);
}

int oracleStep(int n, int s) { return std::max(1, n + s); }

}  // namespace

TEST_CASE("documented adjustment examples") {
  CHECK(applyAdjustment(AbsoluteAdjustment{5}, 10) == 5);
  CHECK(applyAdjustment(StepAdjustment{-5}, 1) == 1);
  CHECK(applyAdjustment(RelativeAdjustment{25, 1}, 10) == 13);
}

TEST_CASE("absolute adjustment over the grid") {
  for (int goal = 1; goal <= 20; ++goal)
    for (int n = 1; n <= 50; ++n)
      CHECK(applyAdjustment(AbsoluteAdjustment{goal}, n) == oracleAbsolute(goal));
}

TEST_CASE("step adjustment over the grid") {
  for (int s = -10; s <= 10; ++s) {
    if (s == 0) continue;
    for (int n = 1; n <= 50; ++n)
      CHECK(applyAdjustment(StepAdjustment{s}, n) == oracleStep(n, s));
  }
}

TEST_CASE("relative adjustment over the grid") {
  for (int p = -200; p <= 200; p += 25) {
    if (p == 0) continue;
    for (int m = -5; m <= 5; ++m) {
      if (m == 0 || (m > 0) != (p > 0)) continue;
      for (int n = 1; n <= 50; ++n)
        CHECK(applyAdjustment(RelativeAdjustment{p, m}, n) == oracleRelative(n, p, m));
    }
  }
}

TEST_CASE("results never drop below one") {
  for (int n = 1; n <= 50; ++n) {
    CHECK(applyAdjustment(StepAdjustment{-100}, n) >= 1);
    CHECK(applyAdjustment(RelativeAdjustment{-200, -5}, n) >= 1);
  }
}

TEST_CASE("positive relative growth is strict and monotone") {
  int prev = 0;
  for (int n = 1; n <= 50; ++n) {
    int next = applyAdjustment(RelativeAdjustment{25, 1}, n);
    CHECK(next > n);
    CHECK(next >= prev);
    prev = next;
  }
}

TEST_CASE("malformed adjustments are rejected") {
  CHECK_THROWS_AS(applyAdjustment(AbsoluteAdjustment{0}, 3), spdsim::Error);
  CHECK_THROWS_AS(applyAdjustment(StepAdjustment{0}, 3), spdsim::Error);
  CHECK_THROWS_AS(applyAdjustment(RelativeAdjustment{25, -1}, 3), spdsim::Error);
  CHECK_THROWS_AS(applyAdjustment(RelativeAdjustment{-25, 1}, 3), spdsim::Error);
  CHECK_THROWS_AS(applyAdjustment(RelativeAdjustment{0, 1}, 3), spdsim::Error);
  CHECK_THROWS_AS(applyAdjustment(StepAdjustment{1}, 0), spdsim::Error);
}
