#include "spdsim/sim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace spdsim::sim {
namespace {

ResponseSummary summarize(std::vector<double> durations, double observation_s) {
  ResponseSummary s;
  s.count = static_cast<long long>(durations.size());
  if (durations.empty() || observation_s <= 0) return s;
  double sum = 0;
  for (double d : durations) sum += d;
  s.mean_s = sum / static_cast<double>(durations.size());
  std::sort(durations.begin(), durations.end());
  auto rank = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(durations.size())));
  if (rank < 1) rank = 1;
  s.p95_s = durations[rank - 1];
  s.throughput_per_s = static_cast<double>(durations.size()) / observation_s;
  s.defined = true;
  return s;
}

}  // namespace

RunMetrics computeMetrics(const SimulationResult& result) {
  RunMetrics m;
  m.observation_s = result.horizon_s - result.warmup_s;
  if (m.observation_s < 0) m.observation_s = 0;

  std::vector<double> all;
  std::map<std::string, std::vector<double>> by_operation;
  for (const auto& c : result.completions) {
    if (c.completion_time_s <= result.warmup_s) continue;
    all.push_back(c.duration_s);
    by_operation[c.operation].push_back(c.duration_s);
  }
  m.overall = summarize(std::move(all), m.observation_s);
  for (auto& [op, durations] : by_operation)
    m.per_operation[op] = summarize(std::move(durations), m.observation_s);

  // Group sizes are step functions; integrate each over the observation.
  std::map<std::string, std::vector<std::pair<double, int>>> steps;
  for (const auto& e : result.timeline) steps[e.group].emplace_back(e.time_s, e.size);
  for (auto& [group, series] : steps) {
    GroupSummary g;
    g.final_size = series.back().second;
    double integral = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
      double from = series[i].first;
      double to = i + 1 < series.size() ? series[i + 1].first : result.horizon_s;
      double lo = std::max(from, result.warmup_s);
      double hi = std::min(to, result.horizon_s);
      if (hi > lo) integral += (hi - lo) * series[i].second;
    }
    if (m.observation_s > 0) g.mean_size = integral / m.observation_s;
    auto busy = result.busy_seconds.find(group);
    if (busy != result.busy_seconds.end() && integral > 0) {
      g.utilization_pct = 100.0 * busy->second / integral;
      g.utilization_defined = true;
    }
    m.per_group[group] = g;
  }
  return m;
}

}  // namespace spdsim::sim
