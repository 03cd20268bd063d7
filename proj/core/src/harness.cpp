#include "skimmer/harness.hpp"

namespace skimmer {

ScenarioResult run_scenario(const Scenario& scenario,
                            const std::function<void(const TraceRecord&)>& on_row) {
  Simulation sim(scenario);
  MetricsAccumulator metrics(metrics_spec_for(sim.scenario()));
  ScenarioResult result;
  result.trace.reserve(sim.total_ticks());
  while (!sim.finished()) {
    TraceRecord row = sim.tick();
    // Metrics see the file precision so a saved trace reproduces them exactly.
    metrics.add(quantize(row));
    if (on_row) on_row(row);
    result.trace.push_back(std::move(row));
  }
  result.metrics = metrics.report();
  result.transitions = sim.transitions();
  return result;
}

}  // namespace skimmer
