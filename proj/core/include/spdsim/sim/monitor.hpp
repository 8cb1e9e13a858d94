#pragma once

// Run-time measurement store. The engine feeds it per-group samples; trigger
// evaluation asks it for windowed aggregates. A window with no samples yields
// an undefined value, and an undefined value never fires a trigger.
//
// Group measures:
//   utilization   mean busy percentage of the containers backing the group
//   queue length  waiting messages of a consumer group's queue
//   response time completed invocations served by the group's replicas
//
// Samples older than the retention horizon are discarded.

#include <deque>
#include <map>
#include <string>

#include "spdsim/spd/model.hpp"

namespace spdsim::sim {

struct StimulusValue {
  bool defined = false;
  double value = 0;
};

class Monitor {
 public:
  explicit Monitor(double retention_s = 3600) : retention_s_(retention_s) {}

  void recordUtilization(const std::string& group, double time_s, double percent);
  void recordQueueLength(const std::string& group, double time_s, double length);
  void recordCompletion(const std::string& group, double time_s, double duration_s);

  // Aggregate over (end_time - window, end_time] for a windowed stimulus.
  // Instantaneous stimulus kinds are not answered here; the caller holds the
  // current size and clock.
  StimulusValue aggregate(const spd::Stimulus& stimulus, const std::string& group,
                          double end_time_s) const;

 private:
  using Series = std::deque<std::pair<double, double>>;  // (time, value)

  void push(std::map<std::string, Series>& store, const std::string& group, double time_s,
            double value);

  double retention_s_;
  std::map<std::string, Series> utilization_;
  std::map<std::string, Series> queue_length_;
  std::map<std::string, Series> completions_;  // value = duration
};

}  // namespace spdsim::sim
