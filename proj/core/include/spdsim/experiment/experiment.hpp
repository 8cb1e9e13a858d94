#pragma once

// Experiment orchestration: load a run specification and its models, execute
// replications, aggregate across them, and export deterministic result files.
// Also the comparison step over finished runs.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spdsim/analysis/compare.hpp"
#include "spdsim/analysis/stats.hpp"
#include "spdsim/arch/model.hpp"
#include "spdsim/sim/engine.hpp"
#include "spdsim/sim/metrics.hpp"
#include "spdsim/spd/model.hpp"

namespace spdsim::experiment {

struct WorkloadOverride {
  std::optional<int> population;
  std::optional<double> think_time_s;  // replaces think time with a constant
};

struct ExperimentSpec {
  std::string architecture_file;
  std::string spd_file;  // empty = static run without policies
  double horizon_s = 300;
  double warmup_s = 0;
  int replications = 1;
  std::uint64_t base_seed = 1;
  WorkloadOverride workload;
  int max_replicas_per_container = 1;
  std::string output_dir;  // empty = no files written by default
};

// JSON keys: architecture, policies, horizon_s, warmup_s, replications,
// seed, workload{population, think_time_s}, max_replicas_per_container,
// output_dir. Relative paths resolve against the spec file's directory.
// Throws Error("SPEC_ERROR") on malformed content, Error("IO_ERROR") on
// unreadable files.
ExperimentSpec loadExperimentSpec(const std::string& path);

// replications >= 1, horizon > 0, warmup < horizon.
void validateSpec(const ExperimentSpec& spec);

std::string readFile(const std::string& path);

struct LoadedModels {
  arch::ArchitectureModel architecture;  // workload override already applied
  spd::SpdModel policies;                // empty when no policy file named
};

// Load and validate both models; throws Error("LOAD_ERROR") carrying the
// first diagnostic when any check fails.
LoadedModels loadModels(const ExperimentSpec& spec);

struct ReplicationOutcome {
  int replication = 0;
  sim::SimulationResult result;
  sim::RunMetrics metrics;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<ReplicationOutcome> replications;
  std::vector<std::string> aborted;  // "<replication>: <error>" per failure

  analysis::Summary mean_response_s;  // across replications
  analysis::Summary p95_response_s;
  analysis::Summary throughput_per_s;
  std::map<std::string, analysis::Summary> group_mean_size;
  std::map<std::string, std::string> group_kinds;  // infrastructure/service/consumers
  long long effective_adaptations = 0;             // all replications
  long long vetoed_adaptations = 0;
};

// Replication i runs with seed base_seed + i; replications are independent.
ExperimentResult runExperiment(const ExperimentSpec& spec, const LoadedModels& models);

// Writes summary.json, responsetimes.csv, timeline.csv and trace.csv into
// dir. Everything in summary.json can be recomputed from the CSVs.
void writeOutputs(const ExperimentResult& result, const std::string& dir);

// ---- comparison across finished runs ----

struct ConfigurationSummary {
  std::string name;
  std::map<std::string, double> metrics;  // point values from summary.json
};

// path may be a run directory (containing summary.json) or the file itself.
ConfigurationSummary readRunSummary(const std::string& path, const std::string& name);

struct GroundTruthRow {
  std::string policy;
  std::string workload;
  std::string metric;
  double value = 0;
  std::string unit;
};

// CSV with header policy,workload,metric,value,unit.
std::vector<GroundTruthRow> loadGroundTruth(const std::string& csv_path);

struct ComparisonRequest {
  std::vector<ConfigurationSummary> configurations;
  std::string baseline;  // must name one configuration
  std::vector<GroundTruthRow> ground_truth;
};

struct ComparisonResult {
  std::vector<analysis::MetricDef> metrics;  // shared by all configurations
  std::map<std::string, double> kappa;
  std::map<std::string, std::map<std::string, double>> speedup;
  std::map<std::string, std::map<std::string, double>> rae;
  double mape = 0;
  bool mape_defined = false;
  std::map<std::string, analysis::Correlation> speedup_correlation;  // per metric
};

ComparisonResult compareRuns(const ComparisonRequest& request);

// Long-format table: row,configuration,metric,value with row kinds value,
// speedup, kappa, rae, mape, pearson_r, pearson_p.
std::string comparisonCsv(const ComparisonResult& result, const ComparisonRequest& request);

}  // namespace spdsim::experiment
