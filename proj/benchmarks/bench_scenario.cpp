#include <benchmark/benchmark.h>

#include "skimmer/harness.hpp"

namespace {

// Whole headless runs, including trace collection and metrics.
void BM_RunScenario(benchmark::State& state, const char* name) {
  const auto sc = skimmer::builtin_scenario(name);
  for (auto _ : state) {
    const auto r = skimmer::run_scenario(sc);
    benchmark::DoNotOptimize(r.metrics.rows);
  }
}
BENCHMARK_CAPTURE(BM_RunScenario, waypoint_square, "waypoint_square")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunScenario, follow_approach, "follow_approach")->Unit(benchmark::kMillisecond);

}  // namespace
