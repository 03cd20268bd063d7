#pragma once

#include <functional>
#include <vector>

#include "skimmer/metrics.hpp"
#include "skimmer/scenario.hpp"
#include "skimmer/simulation.hpp"
#include "skimmer/trace.hpp"

namespace skimmer {

struct ScenarioResult {
  std::vector<TraceRecord> trace;  // full precision, one row per tick
  MetricsReport metrics;           // computed from the rows as they would be read back
  std::vector<LoggedTransition> transitions;
};

/// Runs the scenario headless to completion. Deterministic for a given
/// scenario (seeds included). `on_row` sees every row as it is produced.
ScenarioResult run_scenario(const Scenario& scenario,
                            const std::function<void(const TraceRecord&)>& on_row = {});

}  // namespace skimmer
