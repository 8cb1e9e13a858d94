#pragma once

// Cross-configuration comparison: error measures against reference values,
// direction-aware speedups, and a pairwise ranking score.

#include <map>
#include <string>
#include <vector>

namespace spdsim::analysis {

struct MetricDef {
  std::string name;
  bool lower_is_better = true;
};

// Rounds to the given number of significant digits; comparison ties are
// decided on the rounded values.
double roundSignificant(double value, int digits);

// Pairwise ranking over configurations: each configuration earns 1 for a win
// and 0.5 for a tie against every other configuration on every metric,
// scaled so the scores of n configurations always sum to 50 n.
// values[configuration][metric name] must be filled for all combinations.
std::map<std::string, double> pairwiseScores(
    const std::vector<std::string>& configurations, const std::vector<MetricDef>& metrics,
    const std::map<std::string, std::map<std::string, double>>& values);

// |reference - predicted| / reference; reference must be nonzero.
double relativeAbsoluteError(double reference, double predicted);

// 100 * mean of the pairwise relative absolute errors.
double meanAbsolutePercentageError(const std::vector<double>& reference,
                                   const std::vector<double>& predicted);

// How much better the variant is than the baseline, as a ratio > 1 when it
// improves: baseline/variant when lower is better, variant/baseline when
// higher is better.
double speedup(double baseline, double variant, bool lower_is_better);

}  // namespace spdsim::analysis
