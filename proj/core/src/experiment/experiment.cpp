#include "spdsim/experiment/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "spdsim/arch/parse.hpp"
#include "spdsim/diagnostics.hpp"
#include "spdsim/runtime/transform.hpp"
#include "spdsim/spd/parse.hpp"
#include "spdsim/spd/validate.hpp"
#include "text/fmt.hpp"

namespace spdsim::experiment {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// Metric set used for ranking and speedups, with direction.
const std::vector<analysis::MetricDef> kStandardMetrics = {
    {"mean_response_s", true},
    {"p95_response_s", true},
    {"throughput_per_s", false},
    {"mean_containers", true},
};

std::string firstError(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics)
    if (d.severity == Severity::Error) {
      std::ostringstream os;
      os << d;
      return os.str();
    }
  return "unknown error";
}

std::string outcomeText(const runtime::EnactmentOutcome& o) {
  if (std::holds_alternative<runtime::Applied>(o)) return "applied";
  if (const auto* c = std::get_if<runtime::Clamped>(&o))
    return "clamped:" + std::to_string(c->from) + "->" + std::to_string(c->to);
  return "vetoed:" + std::get<runtime::Vetoed>(o).reason;
}

ordered_json summaryJson(const analysis::Summary& s) {
  ordered_json j;
  j["n"] = s.n;
  j["mean"] = s.mean;
  if (s.ci_defined) {
    j["stddev"] = s.stddev;
    j["ci95"] = s.ci_halfwidth;
  }
  return j;
}

std::ofstream openOut(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw Error("IO_ERROR", "cannot write " + path.string());
  return f;
}

}  // namespace

std::string readFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("IO_ERROR", "cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

ExperimentSpec loadExperimentSpec(const std::string& path) {
  ordered_json j;
  try {
    j = ordered_json::parse(readFile(path));
  } catch (const ordered_json::exception& e) {
    throw Error("SPEC_ERROR", path + ": " + e.what());
  }
  ExperimentSpec spec;
  fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    return fs::path(p).is_absolute() ? p : (base / p).string();
  };
  try {
    spec.architecture_file = resolve(j.at("architecture").get<std::string>());
    if (j.contains("policies") && !j["policies"].is_null())
      spec.spd_file = resolve(j["policies"].get<std::string>());
    if (j.contains("horizon_s")) spec.horizon_s = j["horizon_s"].get<double>();
    if (j.contains("warmup_s")) spec.warmup_s = j["warmup_s"].get<double>();
    if (j.contains("replications")) spec.replications = j["replications"].get<int>();
    if (j.contains("seed")) spec.base_seed = j["seed"].get<std::uint64_t>();
    if (j.contains("max_replicas_per_container"))
      spec.max_replicas_per_container = j["max_replicas_per_container"].get<int>();
    if (j.contains("workload")) {
      const auto& w = j["workload"];
      if (w.contains("population")) spec.workload.population = w["population"].get<int>();
      if (w.contains("think_time_s"))
        spec.workload.think_time_s = w["think_time_s"].get<double>();
    }
    if (j.contains("output_dir")) spec.output_dir = resolve(j["output_dir"].get<std::string>());
  } catch (const ordered_json::exception& e) {
    throw Error("SPEC_ERROR", path + ": " + e.what());
  }
  return spec;
}

void validateSpec(const ExperimentSpec& spec) {
  if (spec.architecture_file.empty())
    throw Error("SPEC_ERROR", "no architecture file named");
  if (spec.replications < 1) throw Error("SPEC_ERROR", "replications must be at least 1");
  if (!(spec.horizon_s > 0)) throw Error("SPEC_ERROR", "horizon must be positive");
  if (spec.warmup_s < 0 || spec.warmup_s >= spec.horizon_s)
    throw Error("SPEC_ERROR", "warmup must lie in [0, horizon)");
  if (spec.max_replicas_per_container < 1)
    throw Error("SPEC_ERROR", "max replicas per container must be at least 1");
}

LoadedModels loadModels(const ExperimentSpec& spec) {
  LoadedModels out;
  auto loaded = arch::loadArchitecture(readFile(spec.architecture_file),
                                       spec.architecture_file);
  if (!loaded.ok()) throw Error("LOAD_ERROR", firstError(loaded.diagnostics));
  out.architecture = std::move(*loaded.model);

  if (!spec.spd_file.empty()) {
    auto parsed = spd::parseSpd(readFile(spec.spd_file), spec.spd_file);
    if (!parsed.ok()) throw Error("LOAD_ERROR", firstError(parsed.diagnostics));
    auto diagnostics = spd::validateSpd(*parsed.model, &out.architecture);
    if (hasErrors(diagnostics)) throw Error("LOAD_ERROR", firstError(diagnostics));
    out.policies = std::move(*parsed.model);
  }

  if (spec.workload.population) {
    if (*spec.workload.population < 1)
      throw Error("SPEC_ERROR", "population must be at least 1");
    out.architecture.usage.population = *spec.workload.population;
  }
  if (spec.workload.think_time_s) {
    if (*spec.workload.think_time_s < 0)
      throw Error("SPEC_ERROR", "think time must be non-negative");
    out.architecture.usage.think_time = arch::ConstantExpr{*spec.workload.think_time_s};
  }
  return out;
}

ExperimentResult runExperiment(const ExperimentSpec& spec, const LoadedModels& models) {
  validateSpec(spec);
  ExperimentResult out;
  out.spec = spec;
  for (const auto& tg : models.policies.target_groups) {
    const char* kind = "consumers";
    if (tg.isInfrastructure())
      kind = "infrastructure";
    else if (std::holds_alternative<spd::ServiceGroup>(tg.kind))
      kind = "service";
    out.group_kinds[tg.name] = kind;
  }

  std::vector<double> means;
  std::vector<double> p95s;
  std::vector<double> rates;
  std::map<std::string, std::vector<double>> sizes;
  for (int r = 0; r < spec.replications; ++r) {
    try {
      auto cfg = runtime::identifyInitialConfiguration(models.architecture, models.policies,
                                                       spec.max_replicas_per_container);
      sim::SimulationParams params;
      params.horizon_s = spec.horizon_s;
      params.warmup_s = spec.warmup_s;
      params.seed = spec.base_seed + static_cast<std::uint64_t>(r);
      auto result = sim::simulate(cfg, params);
      auto metrics = sim::computeMetrics(result);
      if (metrics.overall.defined) {
        means.push_back(metrics.overall.mean_s);
        p95s.push_back(metrics.overall.p95_s);
        rates.push_back(metrics.overall.throughput_per_s);
      }
      for (const auto& [group, gm] : metrics.per_group)
        sizes[group].push_back(gm.mean_size);
      for (const auto& te : result.trace) {
        if (runtime::isEffective(te.record))
          ++out.effective_adaptations;
        else
          ++out.vetoed_adaptations;
      }
      out.replications.push_back({r, std::move(result), std::move(metrics)});
    } catch (const Error& e) {
      out.aborted.push_back(std::to_string(r) + ": " + e.what());
    }
  }
  out.mean_response_s = analysis::summarize(means);
  out.p95_response_s = analysis::summarize(p95s);
  out.throughput_per_s = analysis::summarize(rates);
  for (const auto& [group, values] : sizes)
    out.group_mean_size[group] = analysis::summarize(values);
  return out;
}

void writeOutputs(const ExperimentResult& result, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("IO_ERROR", "cannot create " + dir + ": " + ec.message());

  {
    auto f = openOut(fs::path(dir) / "responsetimes.csv");
    f << "replication,operation,completion_time_s,duration_s\n";
    for (const auto& rep : result.replications)
      for (const auto& c : rep.result.completions)
        f << rep.replication << ',' << c.operation << ','
          << text::fmtDouble(c.completion_time_s) << ',' << text::fmtDouble(c.duration_s)
          << '\n';
  }
  {
    auto f = openOut(fs::path(dir) / "timeline.csv");
    f << "replication,target_group,time_s,size\n";
    for (const auto& rep : result.replications)
      for (const auto& e : rep.result.timeline)
        f << rep.replication << ',' << e.group << ',' << text::fmtDouble(e.time_s) << ','
          << e.size << '\n';
  }
  {
    auto f = openOut(fs::path(dir) / "trace.csv");
    f << "replication,time_s,policy,size_before,size_after,outcome\n";
    for (const auto& rep : result.replications)
      for (const auto& t : rep.result.trace)
        f << rep.replication << ',' << text::fmtDouble(t.record.time_s) << ','
          << t.record.policy << ',' << t.record.size_before << ',' << t.record.size_after
          << ',' << outcomeText(t.record.outcome) << '\n';
  }

  const ExperimentSpec& spec = result.spec;
  ordered_json j;
  ordered_json exp;
  exp["architecture"] = spec.architecture_file;
  if (spec.spd_file.empty())
    exp["policies"] = nullptr;
  else
    exp["policies"] = spec.spd_file;
  exp["horizon_s"] = spec.horizon_s;
  exp["warmup_s"] = spec.warmup_s;
  exp["replications"] = spec.replications;
  exp["seed"] = spec.base_seed;
  exp["max_replicas_per_container"] = spec.max_replicas_per_container;
  if (spec.workload.population)
    exp["population"] = *spec.workload.population;
  else
    exp["population"] = nullptr;
  if (spec.workload.think_time_s)
    exp["think_time_s"] = *spec.workload.think_time_s;
  else
    exp["think_time_s"] = nullptr;
  j["experiment"] = exp;

  ordered_json metrics;
  if (result.mean_response_s.n > 0) {
    metrics["mean_response_s"] = result.mean_response_s.mean;
    metrics["p95_response_s"] = result.p95_response_s.mean;
    metrics["throughput_per_s"] = result.throughput_per_s.mean;
  }
  double containers = 0;
  bool any_infra = false;
  for (const auto& [group, summary] : result.group_mean_size) {
    auto kind = result.group_kinds.find(group);
    if (kind != result.group_kinds.end() && kind->second == "infrastructure" &&
        summary.n > 0) {
      containers += summary.mean;
      any_infra = true;
    }
  }
  if (any_infra) metrics["mean_containers"] = containers;
  j["metrics"] = metrics;

  ordered_json rt;
  rt["mean"] = summaryJson(result.mean_response_s);
  rt["p95"] = summaryJson(result.p95_response_s);
  j["response_time_s"] = rt;
  j["throughput_per_s"] = summaryJson(result.throughput_per_s);

  ordered_json adapt;
  adapt["effective"] = result.effective_adaptations;
  adapt["vetoed"] = result.vetoed_adaptations;
  ordered_json per_rep = ordered_json::array();
  for (const auto& rep : result.replications) {
    long long eff = 0;
    long long veto = 0;
    for (const auto& t : rep.result.trace) {
      if (runtime::isEffective(t.record))
        ++eff;
      else
        ++veto;
    }
    ordered_json row;
    row["replication"] = rep.replication;
    row["effective"] = eff;
    row["vetoed"] = veto;
    per_rep.push_back(row);
  }
  adapt["per_replication"] = per_rep;
  j["adaptations"] = adapt;

  ordered_json groups;
  for (const auto& [group, summary] : result.group_mean_size) {
    ordered_json g;
    auto kind = result.group_kinds.find(group);
    g["kind"] = kind != result.group_kinds.end() ? kind->second : "unknown";
    g["mean_size"] = summaryJson(summary);
    ordered_json finals = ordered_json::array();
    for (const auto& rep : result.replications) {
      auto it = rep.metrics.per_group.find(group);
      finals.push_back(it != rep.metrics.per_group.end() ? it->second.final_size : 0);
    }
    g["final_sizes"] = finals;
    groups[group] = g;
  }
  j["groups"] = groups;

  ordered_json aborted = ordered_json::array();
  for (const auto& a : result.aborted) aborted.push_back(a);
  j["aborted"] = aborted;

  auto f = openOut(fs::path(dir) / "summary.json");
  f << j.dump(2) << '\n';
}

ConfigurationSummary readRunSummary(const std::string& path, const std::string& name) {
  fs::path p(path);
  if (fs::is_directory(p)) p /= "summary.json";
  ordered_json j;
  try {
    j = ordered_json::parse(readFile(p.string()));
  } catch (const ordered_json::exception& e) {
    throw Error("FORMAT_ERROR", p.string() + ": " + e.what());
  }
  ConfigurationSummary out;
  out.name = name;
  if (j.contains("metrics"))
    for (const auto& [key, value] : j["metrics"].items())
      if (value.is_number()) out.metrics[key] = value.get<double>();
  return out;
}

std::vector<GroundTruthRow> loadGroundTruth(const std::string& csv_path) {
  std::istringstream in(readFile(csv_path));
  std::string line;
  if (!std::getline(in, line))
    throw Error("FORMAT_ERROR", csv_path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "policy,workload,metric,value,unit")
    throw Error("FORMAT_ERROR", csv_path + ": unexpected header \"" + line + "\"");

  std::vector<GroundTruthRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() < 4 || fields.size() > 5)
      throw Error("FORMAT_ERROR",
                  csv_path + ":" + std::to_string(line_no) + ": expected 5 fields");
    GroundTruthRow row;
    row.policy = fields[0];
    row.workload = fields[1];
    row.metric = fields[2];
    try {
      row.value = std::stod(fields[3]);
    } catch (const std::exception&) {
      throw Error("FORMAT_ERROR",
                  csv_path + ":" + std::to_string(line_no) + ": bad value " + fields[3]);
    }
    if (fields.size() == 5) row.unit = fields[4];
    rows.push_back(row);
  }
  return rows;
}

ComparisonResult compareRuns(const ComparisonRequest& request) {
  if (request.configurations.size() < 2)
    throw Error("ANALYSIS_ERROR", "need at least two runs to compare");
  const ConfigurationSummary* baseline = nullptr;
  for (const auto& c : request.configurations)
    if (c.name == request.baseline) baseline = &c;
  if (!baseline)
    throw Error("ANALYSIS_ERROR", "baseline \"" + request.baseline + "\" is not a run");

  ComparisonResult out;
  for (const auto& metric : kStandardMetrics) {
    bool everywhere = true;
    for (const auto& c : request.configurations)
      if (!c.metrics.count(metric.name)) everywhere = false;
    if (everywhere) out.metrics.push_back(metric);
  }
  if (out.metrics.empty())
    throw Error("ANALYSIS_ERROR", "runs share no comparable metrics");

  std::vector<std::string> names;
  std::map<std::string, std::map<std::string, double>> values;
  for (const auto& c : request.configurations) {
    names.push_back(c.name);
    values[c.name] = c.metrics;
  }
  out.kappa = analysis::pairwiseScores(names, out.metrics, values);

  for (const auto& c : request.configurations)
    for (const auto& metric : out.metrics)
      out.speedup[c.name][metric.name] =
          analysis::speedup(baseline->metrics.at(metric.name), c.metrics.at(metric.name),
                            metric.lower_is_better);

  if (request.ground_truth.empty()) return out;

  // Ground-truth key: the run name must equal the row's policy, or
  // policy-workload when a workload is present.
  std::map<std::string, std::map<std::string, double>> truth;
  for (const auto& row : request.ground_truth) {
    std::string key = row.workload.empty() ? row.policy : row.policy + "-" + row.workload;
    truth[key][row.metric] = row.value;
  }
  std::vector<double> errors;
  for (const auto& c : request.configurations) {
    auto t = truth.find(c.name);
    if (t == truth.end()) continue;
    for (const auto& metric : out.metrics) {
      auto v = t->second.find(metric.name);
      if (v == t->second.end()) continue;
      double rae = analysis::relativeAbsoluteError(v->second, c.metrics.at(metric.name));
      out.rae[c.name][metric.name] = rae;
      errors.push_back(rae);
    }
  }
  if (!errors.empty()) {
    double sum = 0;
    for (double e : errors) sum += e;
    out.mape = 100.0 * sum / static_cast<double>(errors.size());
    out.mape_defined = true;
  }

  auto truth_baseline = truth.find(baseline->name);
  if (truth_baseline != truth.end()) {
    for (const auto& metric : out.metrics) {
      auto base_true = truth_baseline->second.find(metric.name);
      if (base_true == truth_baseline->second.end()) continue;
      std::vector<double> observed;
      std::vector<double> predicted;
      for (const auto& c : request.configurations) {
        if (c.name == baseline->name) continue;
        auto t = truth.find(c.name);
        if (t == truth.end()) continue;
        auto v = t->second.find(metric.name);
        if (v == t->second.end()) continue;
        observed.push_back(
            analysis::speedup(base_true->second, v->second, metric.lower_is_better));
        predicted.push_back(out.speedup.at(c.name).at(metric.name));
      }
      if (observed.size() >= 2)
        out.speedup_correlation[metric.name] = analysis::pearson(observed, predicted);
    }
  }
  return out;
}

std::string comparisonCsv(const ComparisonResult& result, const ComparisonRequest& request) {
  std::ostringstream os;
  os << "row,configuration,metric,value\n";
  for (const auto& c : request.configurations)
    for (const auto& metric : result.metrics)
      os << "value," << c.name << ',' << metric.name << ','
         << text::fmtDouble(c.metrics.at(metric.name)) << '\n';
  for (const auto& c : request.configurations)
    for (const auto& metric : result.metrics)
      os << "speedup," << c.name << ',' << metric.name << ','
         << text::fmtDouble(result.speedup.at(c.name).at(metric.name)) << '\n';
  for (const auto& c : request.configurations)
    os << "kappa," << c.name << ",," << text::fmtDouble(result.kappa.at(c.name)) << '\n';
  for (const auto& c : request.configurations) {
    auto r = result.rae.find(c.name);
    if (r == result.rae.end()) continue;
    for (const auto& metric : result.metrics) {
      auto v = r->second.find(metric.name);
      if (v != r->second.end())
        os << "rae," << c.name << ',' << metric.name << ',' << text::fmtDouble(v->second)
           << '\n';
    }
  }
  if (result.mape_defined) os << "mape,,," << text::fmtDouble(result.mape) << '\n';
  for (const auto& [metric, corr] : result.speedup_correlation) {
    if (!corr.defined) continue;
    os << "pearson_r,," << metric << ',' << text::fmtDouble(corr.r) << '\n';
    os << "pearson_p,," << metric << ',' << text::fmtDouble(corr.p_value) << '\n';
  }
  return os.str();
}

}  // namespace spdsim::experiment
