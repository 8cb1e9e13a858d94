#pragma once

// Performance measures over one simulation result, restricted to the
// observation interval [warmup, horizon]. Percentiles use nearest rank.

#include <map>
#include <string>

#include "spdsim/sim/engine.hpp"

namespace spdsim::sim {

struct ResponseSummary {
  long long count = 0;
  double mean_s = 0;
  double p95_s = 0;
  double throughput_per_s = 0;
  bool defined = false;  // false when nothing completed in the interval
};

struct GroupSummary {
  double mean_size = 0;
  int final_size = 0;
  double utilization_pct = 0;  // container-owning groups only
  bool utilization_defined = false;
};

struct RunMetrics {
  double observation_s = 0;
  ResponseSummary overall;
  std::map<std::string, ResponseSummary> per_operation;
  std::map<std::string, GroupSummary> per_group;
};

RunMetrics computeMetrics(const SimulationResult& result);

}  // namespace spdsim::sim
