// Command line front end: validate, run, compare, render-dot.
//
// Exit codes: 0 success, 1 semantic error (bad model, bad arguments,
// mismatched comparisons), 2 I/O error (unreadable or unwritable files).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "spdsim/arch/parse.hpp"
#include "spdsim/diagnostics.hpp"
#include "spdsim/experiment/experiment.hpp"
#include "spdsim/spd/parse.hpp"
#include "spdsim/spd/render.hpp"
#include "spdsim/spd/validate.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace spdsim;

namespace {

int exitCodeFor(const Error& e) { return e.code() == "IO_ERROR" ? 2 : 1; }

void printDiagnostics(const std::vector<Diagnostic>& diagnostics, bool json) {
  if (json) {
    auto arr = ordered_json::array();
    for (const auto& d : diagnostics) {
      ordered_json row;
      row["file"] = d.span.file;
      row["line"] = d.span.line;
      row["column"] = d.span.column;
      row["severity"] = d.severity == Severity::Error ? "error" : "warning";
      row["code"] = d.code;
      row["message"] = d.message;
      arr.push_back(row);
    }
    std::cerr << arr.dump(2) << '\n';
    return;
  }
  for (const auto& d : diagnostics) std::cerr << d << '\n';
}

struct ValidateOptions {
  std::vector<std::string> files;
  std::string format = "text";
};

int cmdValidate(const ValidateOptions& opt) {
  std::vector<std::string> arch_files;
  std::vector<std::string> spd_files;
  std::vector<Diagnostic> all;
  for (const auto& f : opt.files) {
    auto ext = fs::path(f).extension().string();
    if (ext == ".arch") {
      arch_files.push_back(f);
    } else if (ext == ".spd") {
      spd_files.push_back(f);
    } else {
      std::cerr << "error: " << f << ": unknown file type (expected .arch or .spd)\n";
      return 1;
    }
  }

  std::optional<arch::ArchitectureModel> context;
  for (const auto& f : arch_files) {
    auto loaded = arch::loadArchitecture(experiment::readFile(f), f);
    all.insert(all.end(), loaded.diagnostics.begin(), loaded.diagnostics.end());
    if (loaded.ok() && !context) context = std::move(*loaded.model);
  }
  for (const auto& f : spd_files) {
    auto parsed = spd::parseSpd(experiment::readFile(f), f);
    all.insert(all.end(), parsed.diagnostics.begin(), parsed.diagnostics.end());
    if (!parsed.ok()) continue;
    auto diagnostics = spd::validateSpd(*parsed.model, context ? &*context : nullptr);
    all.insert(all.end(), diagnostics.begin(), diagnostics.end());
  }

  printDiagnostics(all, opt.format == "json");
  return hasErrors(all) ? 1 : 0;
}

struct RunOptions {
  std::string spec_file;
  std::optional<double> horizon;
  std::optional<double> warmup;
  std::optional<int> replications;
  std::optional<std::uint64_t> seed;
  std::optional<int> population;
  std::optional<double> think;
  std::optional<int> max_per_container;
  std::string arch_file;
  std::string spd_file;
  std::string out_dir;
};

int cmdRun(const RunOptions& opt) {
  auto spec = experiment::loadExperimentSpec(opt.spec_file);
  if (opt.horizon) spec.horizon_s = *opt.horizon;
  if (opt.warmup) spec.warmup_s = *opt.warmup;
  if (opt.replications) spec.replications = *opt.replications;
  if (opt.seed) spec.base_seed = *opt.seed;
  if (opt.population) spec.workload.population = *opt.population;
  if (opt.think) spec.workload.think_time_s = *opt.think;
  if (opt.max_per_container) spec.max_replicas_per_container = *opt.max_per_container;
  if (!opt.arch_file.empty()) spec.architecture_file = opt.arch_file;
  if (!opt.spd_file.empty()) spec.spd_file = opt.spd_file == "none" ? "" : opt.spd_file;
  if (!opt.out_dir.empty()) spec.output_dir = opt.out_dir;
  if (spec.output_dir.empty()) spec.output_dir = "out";

  auto models = experiment::loadModels(spec);
  auto result = experiment::runExperiment(spec, models);
  experiment::writeOutputs(result, spec.output_dir);

  int completed = static_cast<int>(result.replications.size());
  std::cout << "completed " << completed << "/" << spec.replications << " replications\n";
  if (result.mean_response_s.n > 0) {
    std::cout << "mean response time: " << result.mean_response_s.mean << " s";
    if (result.mean_response_s.ci_defined)
      std::cout << " +/- " << result.mean_response_s.ci_halfwidth << " (95% CI)";
    std::cout << "\nthroughput: " << result.throughput_per_s.mean << " req/s\n";
  }
  std::cout << "adaptations: " << result.effective_adaptations << " effective, "
            << result.vetoed_adaptations << " vetoed\n";
  for (const auto& a : result.aborted) std::cerr << "aborted replication " << a << '\n';
  std::cout << "results in " << spec.output_dir << '\n';
  return result.aborted.empty() ? 0 : 1;
}

struct CompareOptions {
  std::vector<std::string> run_dirs;
  std::string baseline;
  std::string reference;
  std::string out_file = "comparison.csv";
};

int cmdCompare(const CompareOptions& opt) {
  experiment::ComparisonRequest request;
  for (const auto& dir : opt.run_dirs) {
    fs::path p(dir);
    auto name = p.filename().string();
    if (name.empty()) name = p.parent_path().filename().string();
    request.configurations.push_back(experiment::readRunSummary(dir, name));
  }
  request.baseline = opt.baseline;
  if (!opt.reference.empty()) request.ground_truth = experiment::loadGroundTruth(opt.reference);

  auto result = experiment::compareRuns(request);
  auto csv = experiment::comparisonCsv(result, request);
  if (opt.out_file == "-") {
    std::cout << csv;
    return 0;
  }
  std::ofstream f(opt.out_file);
  if (!f) throw Error("IO_ERROR", "cannot write " + opt.out_file);
  f << csv;
  std::cout << "wrote " << opt.out_file << '\n';
  return 0;
}

struct RenderOptions {
  std::string spd_file;
  std::string out_file;
  std::string format = "text";
};

int cmdRenderDot(const RenderOptions& opt) {
  auto parsed = spd::parseSpd(experiment::readFile(opt.spd_file), opt.spd_file);
  printDiagnostics(parsed.diagnostics, opt.format == "json");
  if (!parsed.ok()) return 1;
  auto dot = spd::exportNotationDot(*parsed.model);
  if (opt.out_file.empty() || opt.out_file == "-") {
    std::cout << dot;
    return 0;
  }
  std::ofstream f(opt.out_file);
  if (!f) throw Error("IO_ERROR", "cannot write " + opt.out_file);
  f << dot;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design-time simulator for elastic software architectures"};
  app.require_subcommand(1);

  ValidateOptions validate_opt;
  auto* validate = app.add_subcommand("validate", "Check model files for errors");
  validate->add_option("files", validate_opt.files, "Model files (.arch, .spd)")
      ->required()
      ->expected(-1);
  validate->add_option("--format", validate_opt.format, "Diagnostic format")
      ->check(CLI::IsMember({"text", "json"}));

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "Execute a simulation experiment");
  run->add_option("experiment", run_opt.spec_file, "Experiment description (JSON)")
      ->required();
  run->add_option("--horizon", run_opt.horizon, "Simulated horizon in seconds");
  run->add_option("--warmup", run_opt.warmup, "Warmup cutoff in seconds");
  run->add_option("--replications", run_opt.replications, "Number of replications");
  run->add_option("--seed", run_opt.seed, "Base random seed");
  run->add_option("--population", run_opt.population, "Override user population");
  run->add_option("--think", run_opt.think, "Override think time with a constant (s)");
  run->add_option("--max-per-container", run_opt.max_per_container,
                  "Max replicas per container");
  run->add_option("--arch", run_opt.arch_file, "Override architecture file");
  run->add_option("--spd", run_opt.spd_file, "Override policy file ('none' for static run)");
  run->add_option("--out", run_opt.out_dir, "Output directory");

  CompareOptions compare_opt;
  auto* compare = app.add_subcommand("compare", "Compare finished runs");
  compare->add_option("runs", compare_opt.run_dirs, "Run output directories")
      ->required()
      ->expected(-1);
  compare->add_option("--baseline", compare_opt.baseline, "Baseline run name")->required();
  compare->add_option("--reference", compare_opt.reference, "Ground truth CSV");
  compare->add_option("--out", compare_opt.out_file, "Output CSV ('-' for stdout)");

  RenderOptions render_opt;
  auto* render = app.add_subcommand("render-dot", "Render a policy file as DOT");
  render->add_option("file", render_opt.spd_file, "Policy file (.spd)")->required();
  render->add_option("--out", render_opt.out_file, "Output file ('-' for stdout)");
  render->add_option("--format", render_opt.format, "Diagnostic format")
      ->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(validate)) return cmdValidate(validate_opt);
    if (app.got_subcommand(run)) return cmdRun(run_opt);
    if (app.got_subcommand(compare)) return cmdCompare(compare_opt);
    if (app.got_subcommand(render)) return cmdRenderDot(render_opt);
  } catch (const Error& e) {
    std::cerr << "error [" << e.code() << "] " << e.message() << '\n';
    return exitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
