#pragma once

// Scenario metrics computed from trace rows alone (plus the scenario's
// declared limits), so a saved trace reproduces the report exactly.
//
// Definitions:
//   xte_rms_m         RMS of cross-track error over Auto ticks with a valid segment
//   waypoints_reached highest mission index seen
//   mission_time_s    time of the first row with every waypoint reached
//   acquisition       first row where the target is in frame; pct_in_frame is
//                     measured from there to the end over rows with a target
//   settle_time_s     first row with |distance - standoff| <= tolerance
//   standoff_err_*    |distance - standoff| over rows from settling onward
//   standoff_hold_s   longest contiguous run within tolerance (rows * dt)
//   final_distance_m  vessel-target distance on the last row with a target

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skimmer/scenario.hpp"
#include "skimmer/trace.hpp"

namespace skimmer {

inline constexpr double kDefaultStandoffTolM = 2.0;

struct MetricsSpec {
  double dt_s = 0.02;
  std::size_t mission_size = 0;
  double standoff_m = 10.0;
  double standoff_tol_m = kDefaultStandoffTolM;
  Thresholds thresholds;
};

MetricsSpec metrics_spec_for(const Scenario& scenario);

struct ThresholdResult {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
  friend bool operator==(const ThresholdResult&, const ThresholdResult&) = default;
};

struct MetricsReport {
  std::uint64_t rows = 0;
  std::uint64_t xte_samples = 0;
  double xte_rms_m = 0.0;
  std::uint64_t waypoints_reached = 0;
  std::optional<double> mission_time_s;
  bool acquired = false;
  double acquisition_t_s = 0.0;
  double pct_in_frame = 0.0;
  std::optional<double> settle_time_s;
  double standoff_err_mean_m = 0.0;
  double standoff_err_max_m = 0.0;
  double standoff_hold_s = 0.0;
  std::optional<double> final_distance_m;
  double max_abs_rate_target_radps = 0.0;
  double max_rate_step_radps = 0.0;
  std::vector<ThresholdResult> thresholds;

  bool all_pass() const;
  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Streaming accumulator; feed rows in order then call report().
class MetricsAccumulator {
 public:
  explicit MetricsAccumulator(MetricsSpec spec);

  void add(const TraceRecord& row);
  MetricsReport report() const;

 private:
  MetricsSpec spec_;
  std::uint64_t rows_ = 0;
  std::uint64_t xte_n_ = 0;
  double xte_sq_sum_ = 0.0;
  std::uint64_t max_wp_ = 0;
  std::optional<double> mission_time_;
  std::optional<double> acquired_at_;
  std::uint64_t frame_rows_ = 0;
  std::uint64_t frame_hits_ = 0;
  std::optional<double> settled_at_;
  std::uint64_t settled_rows_ = 0;
  double err_sum_ = 0.0;
  double err_max_ = 0.0;
  std::uint64_t run_ = 0;
  std::uint64_t best_run_ = 0;
  std::optional<double> last_distance_;
  double max_rate_ = 0.0;
  double max_step_ = 0.0;
  std::optional<double> prev_rate_;
};

MetricsReport compute_metrics(const std::vector<TraceRecord>& rows, const MetricsSpec& spec);

/// One JSON object on one line (same writer as the trace).
std::string metrics_line(const MetricsReport& report);
/// Human-readable multi-line summary.
std::string metrics_summary(const MetricsReport& report);

}  // namespace skimmer
