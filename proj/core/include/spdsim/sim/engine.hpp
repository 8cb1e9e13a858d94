#pragma once

// Discrete-event simulation of a runtime configuration under a closed
// workload. Users cycle through think time and one scenario call; calls run
// component behaviors on replicas whose containers serve demands under
// processor sharing or FCFS; queues hand messages to competing consumers.
// The monitor samples every group each second and policies are evaluated on
// a coarser grid, transforming the configuration mid-run.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spdsim/runtime/config.hpp"

namespace spdsim::sim {

struct SimulationParams {
  double horizon_s = 600;
  double warmup_s = 0;      // carried into the result for the metrics pass
  std::uint64_t seed = 1;
  double monitor_interval_s = 1;
  double evaluation_interval_s = 15;
};

struct CompletionRecord {
  double completion_time_s = 0;
  double duration_s = 0;
  std::string operation;  // scenario entry, as "assembly.operation"
};

struct SizeTimelineEntry {
  std::string group;
  double time_s = 0;
  int size = 0;
};

struct TraceEntry {
  std::string group;
  runtime::EnactmentRecord record;
};

struct SimulationResult {
  double horizon_s = 0;
  double warmup_s = 0;

  std::vector<CompletionRecord> completions;  // user-facing, whole run
  std::vector<SizeTimelineEntry> timeline;    // initial sizes plus every change
  std::vector<TraceEntry> trace;              // enactment records, time-ordered

  // Busy container time per group owning containers, clipped to the
  // observation interval [warmup, horizon]. Draining containers count
  // toward their group until their last demand completes.
  std::map<std::string, double> busy_seconds;

  long long calls_started = 0;
  long long calls_completed = 0;
  long long messages_enqueued = 0;
  long long messages_consumed = 0;
};

// Runs one replication. The configuration is consumed: transformations
// mutate it in place and the group histories end up in the trace.
SimulationResult simulate(runtime::RuntimeConfiguration& cfg,
                          const SimulationParams& params);

}  // namespace spdsim::sim
