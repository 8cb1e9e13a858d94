#include "spdsim/analysis/compare.hpp"

#include <cmath>

#include "spdsim/diagnostics.hpp"

namespace spdsim::analysis {

double roundSignificant(double value, int digits) {
  if (value == 0 || !std::isfinite(value)) return value;
  double magnitude = std::floor(std::log10(std::fabs(value)));
  double factor = std::pow(10.0, digits - 1 - magnitude);
  return std::round(value * factor) / factor;
}

std::map<std::string, double> pairwiseScores(
    const std::vector<std::string>& configurations, const std::vector<MetricDef>& metrics,
    const std::map<std::string, std::map<std::string, double>>& values) {
  std::map<std::string, double> scores;
  auto n = configurations.size();
  if (n < 2 || metrics.empty()) {
    for (const auto& c : configurations) scores[c] = 0;
    return scores;
  }

  auto value = [&](const std::string& c, const std::string& metric) {
    auto ci = values.find(c);
    if (ci == values.end()) throw Error("ANALYSIS_ERROR", "no values for \"" + c + "\"");
    auto mi = ci->second.find(metric);
    if (mi == ci->second.end())
      throw Error("ANALYSIS_ERROR", "no value of \"" + metric + "\" for \"" + c + "\"");
    return roundSignificant(mi->second, 6);
  };

  double scale = 100.0 / (static_cast<double>(n - 1) * static_cast<double>(metrics.size()));
  for (const auto& a : configurations) {
    double wins = 0;
    for (const auto& b : configurations) {
      if (a == b) continue;
      for (const auto& metric : metrics) {
        double va = value(a, metric.name);
        double vb = value(b, metric.name);
        if (va == vb)
          wins += 0.5;
        else if ((va < vb) == metric.lower_is_better)
          wins += 1;
      }
    }
    scores[a] = scale * wins;
  }
  return scores;
}

double relativeAbsoluteError(double reference, double predicted) {
  if (reference == 0) throw Error("ANALYSIS_ERROR", "reference value is zero");
  return std::fabs(reference - predicted) / std::fabs(reference);
}

double meanAbsolutePercentageError(const std::vector<double>& reference,
                                   const std::vector<double>& predicted) {
  if (reference.size() != predicted.size() || reference.empty())
    throw Error("ANALYSIS_ERROR", "mismatched or empty error series");
  double sum = 0;
  for (std::size_t i = 0; i < reference.size(); ++i)
    sum += relativeAbsoluteError(reference[i], predicted[i]);
  return 100.0 * sum / static_cast<double>(reference.size());
}

double speedup(double baseline, double variant, bool lower_is_better) {
  if (baseline <= 0 || variant <= 0)
    throw Error("ANALYSIS_ERROR", "speedup needs positive values");
  return lower_is_better ? baseline / variant : variant / baseline;
}

}  // namespace spdsim::analysis
