#include <benchmark/benchmark.h>

#include "spdsim/arch/parse.hpp"
#include "spdsim/runtime/transform.hpp"
#include "spdsim/sim/engine.hpp"
#include "spdsim/spd/adjustment.hpp"
#include "spdsim/spd/parse.hpp"

namespace {

const char* kArchSource = R"(
architecture "bench" {
  component "Service" {
    operation "handle" { demand cpu exp(50) }
  }
  container "node" rate 1000 scheduling processor-sharing
  assembly "svc" component "Service"
  allocate "svc" on "node"
  usage {
    population 20
    think exp(5)
    scenario { 100% call "svc.handle" }
  }
}
)";

const char* kSpdSource = R"(
spd "bench" {
  target elastic-infrastructure "nodes" {
    unit container "node"
    constraint size min 1 max 8
  }
  target service-group "svc-group" {
    unit assembly "svc"
    hosting "nodes"
  }
  policy "scale-up" {
    target "nodes"
    trigger fire-on-value cpu-utilization window 30s avg > 60%
    adjust step 1
    constraint cooldown 60s
  }
}
)";

void BM_ParsePolicy(benchmark::State& state) {
  for (auto _ : state) {
    auto parsed = spdsim::spd::parseSpd(kSpdSource);
    benchmark::DoNotOptimize(parsed);
  }
}
BENCHMARK(BM_ParsePolicy);

void BM_ParseArchitecture(benchmark::State& state) {
  for (auto _ : state) {
    auto loaded = spdsim::arch::loadArchitecture(kArchSource);
    benchmark::DoNotOptimize(loaded);
  }
}
BENCHMARK(BM_ParseArchitecture);

void BM_ApplyAdjustment(benchmark::State& state) {
  spdsim::spd::RelativeAdjustment rel{25, 1};
  int n = 1;
  for (auto _ : state) {
    n = spdsim::spd::applyAdjustment(spdsim::spd::AdjustmentType{rel}, n);
    if (n > 64) n = 1;
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_ApplyAdjustment);

void BM_SimulateMinute(benchmark::State& state) {
  auto arch = spdsim::arch::loadArchitecture(kArchSource);
  auto spd = spdsim::spd::parseSpd(kSpdSource);
  for (auto _ : state) {
    auto cfg = spdsim::runtime::identifyInitialConfiguration(*arch.model, *spd.model);
    spdsim::sim::SimulationParams params;
    params.horizon_s = 60;
    params.seed = 7;
    auto result = spdsim::sim::simulate(cfg, params);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_SimulateMinute);

}  // namespace

BENCHMARK_MAIN();
