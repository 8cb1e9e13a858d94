#include "spdsim/spd/adjustment.hpp"

#include <algorithm>
#include <cstdlib>

namespace spdsim::spd {
namespace {

long long ceilDiv(long long num, long long den) {
  // num >= 0, den > 0
  return (num + den - 1) / den;
}

}  // namespace

int applyAdjustment(const AdjustmentType& adjustment, int current_size) {
  if (current_size < 1)
    throw Error("ADJUSTMENT_INVALID", "current size must be at least 1");
  const long long n = current_size;

  if (const auto* abs = std::get_if<AbsoluteAdjustment>(&adjustment)) {
    if (abs->goal < 1)
      throw Error("ADJUSTMENT_INVALID", "absolute goal must be at least 1");
    return abs->goal;
  }

  if (const auto* rel = std::get_if<RelativeAdjustment>(&adjustment)) {
    const long long p = rel->percentage;
    const long long m = rel->min_adjustment;
    if (p == 0 || m == 0 || (p > 0) != (m > 0))
      throw Error("ADJUSTMENT_INVALID",
                  "relative percentage and minimum must be nonzero and share a sign");
    if (p > 0) {
      const long long growth = std::max(ceilDiv(n * p, 100), m);
      return static_cast<int>(n + growth);
    }
    const long long shrink = std::max(n * (-p) / 100, -m);
    return static_cast<int>(std::max<long long>(1, n - shrink));
  }

  const auto& step = std::get<StepAdjustment>(adjustment);
  if (step.step == 0)
    throw Error("ADJUSTMENT_INVALID", "step must be nonzero");
  return static_cast<int>(std::max<long long>(1, n + step.step));
}

}  // namespace spdsim::spd
