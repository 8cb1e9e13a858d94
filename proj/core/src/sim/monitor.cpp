#include "spdsim/sim/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace spdsim::sim {

void Monitor::push(std::map<std::string, Series>& store, const std::string& group,
                   double time_s, double value) {
  Series& s = store[group];
  s.emplace_back(time_s, value);
  double cutoff = time_s - retention_s_;
  while (!s.empty() && s.front().first <= cutoff) s.pop_front();
}

void Monitor::recordUtilization(const std::string& group, double time_s, double percent) {
  push(utilization_, group, time_s, percent);
}

void Monitor::recordQueueLength(const std::string& group, double time_s, double length) {
  push(queue_length_, group, time_s, length);
}

void Monitor::recordCompletion(const std::string& group, double time_s, double duration_s) {
  push(completions_, group, time_s, duration_s);
}

StimulusValue Monitor::aggregate(const spd::Stimulus& stimulus, const std::string& group,
                                 double end_time_s) const {
  const std::map<std::string, Series>* store = nullptr;
  switch (stimulus.kind) {
    case spd::StimulusKind::CpuUtilization: store = &utilization_; break;
    case spd::StimulusKind::QueueLength: store = &queue_length_; break;
    case spd::StimulusKind::OperationResponseTime: store = &completions_; break;
    default: return {};  // instantaneous kinds are answered by the caller
  }
  auto it = store->find(group);
  if (it == store->end()) return {};

  double window = stimulus.window_s.value_or(60.0);
  double begin = end_time_s - window;
  std::vector<double> values;
  for (const auto& [t, v] : it->second)
    if (t > begin && t <= end_time_s) values.push_back(v);
  if (values.empty()) return {};

  if (stimulus.aggregation == spd::Aggregation::Percentile) {
    std::sort(values.begin(), values.end());
    auto n = static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil(stimulus.percentile / 100.0 * n));
    if (rank < 1) rank = 1;
    if (rank > values.size()) rank = values.size();
    return {true, values[rank - 1]};
  }
  double sum = 0;
  for (double v : values) sum += v;
  return {true, sum / static_cast<double>(values.size())};
}

}  // namespace spdsim::sim
