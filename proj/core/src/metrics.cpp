#include "skimmer/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "skimmer/line_format.hpp"

namespace skimmer {

MetricsSpec metrics_spec_for(const Scenario& scenario) {
  MetricsSpec spec;
  spec.dt_s = scenario.dt_s;
  spec.mission_size = scenario.mission.size();
  spec.standoff_m = scenario.thresholds.standoff_m.value_or(scenario.guidance.follow.standoff_m);
  spec.standoff_tol_m = scenario.thresholds.standoff_tol_m.value_or(kDefaultStandoffTolM);
  spec.thresholds = scenario.thresholds;
  return spec;
}

bool MetricsReport::all_pass() const {
  return std::all_of(thresholds.begin(), thresholds.end(),
                     [](const ThresholdResult& t) { return t.pass; });
}

MetricsAccumulator::MetricsAccumulator(MetricsSpec spec) : spec_(std::move(spec)) {}

void MetricsAccumulator::add(const TraceRecord& row) {
  ++rows_;
  if (row.mode == Mode::Auto && row.xte_valid) {
    ++xte_n_;
    xte_sq_sum_ += row.xte_m * row.xte_m;
  }
  max_wp_ = std::max(max_wp_, row.wp_index);
  if (!mission_time_ && spec_.mission_size > 0 && row.wp_index >= spec_.mission_size) {
    mission_time_ = row.t_s;
  }

  if (row.target_valid) {
    if (!acquired_at_ && row.in_frame) acquired_at_ = row.t_s;
    if (acquired_at_) {
      ++frame_rows_;
      if (row.in_frame) ++frame_hits_;
    }
    const double d = std::hypot(row.target_x_m - row.x_m, row.target_y_m - row.y_m);
    last_distance_ = d;
    const double err = std::abs(d - spec_.standoff_m);
    const bool within = err <= spec_.standoff_tol_m;
    if (!settled_at_ && within) settled_at_ = row.t_s;
    if (settled_at_) {
      ++settled_rows_;
      err_sum_ += err;
      err_max_ = std::max(err_max_, err);
    }
    run_ = within ? run_ + 1 : 0;
    best_run_ = std::max(best_run_, run_);
  } else {
    run_ = 0;
  }

  max_rate_ = std::max(max_rate_, std::abs(row.rate_target_radps));
  if (prev_rate_) max_step_ = std::max(max_step_, std::abs(row.rate_target_radps - *prev_rate_));
  prev_rate_ = row.rate_target_radps;
}

MetricsReport MetricsAccumulator::report() const {
  MetricsReport r;
  r.rows = rows_;
  r.xte_samples = xte_n_;
  r.xte_rms_m = xte_n_ ? std::sqrt(xte_sq_sum_ / static_cast<double>(xte_n_)) : 0.0;
  r.waypoints_reached = max_wp_;
  r.mission_time_s = mission_time_;
  r.acquired = acquired_at_.has_value();
  r.acquisition_t_s = acquired_at_.value_or(0.0);
  r.pct_in_frame =
      frame_rows_ ? 100.0 * static_cast<double>(frame_hits_) / static_cast<double>(frame_rows_)
                  : 0.0;
  r.settle_time_s = settled_at_;
  r.standoff_err_mean_m = settled_rows_ ? err_sum_ / static_cast<double>(settled_rows_) : 0.0;
  r.standoff_err_max_m = err_max_;
  r.standoff_hold_s = static_cast<double>(best_run_) * spec_.dt_s;
  r.final_distance_m = last_distance_;
  r.max_abs_rate_target_radps = max_rate_;
  r.max_rate_step_radps = max_step_;

  const Thresholds& th = spec_.thresholds;
  auto add = [&](const char* name, double value, double limit, bool pass) {
    r.thresholds.push_back({name, value, limit, pass});
  };
  if (th.min_waypoints_reached) {
    const auto limit = static_cast<double>(*th.min_waypoints_reached);
    add("min_waypoints_reached", static_cast<double>(max_wp_), limit,
        max_wp_ >= *th.min_waypoints_reached);
  }
  if (th.max_mission_time_s) {
    // An unfinished mission fails and has no finite value.
    const double value = mission_time_.value_or(std::numeric_limits<double>::infinity());
    add("max_mission_time_s", value, *th.max_mission_time_s,
        mission_time_.has_value() && value <= *th.max_mission_time_s);
  }
  if (th.max_xte_rms_m) {
    add("max_xte_rms_m", r.xte_rms_m, *th.max_xte_rms_m,
        xte_n_ > 0 && r.xte_rms_m < *th.max_xte_rms_m);
  }
  if (th.min_standoff_hold_s) {
    add("min_standoff_hold_s", r.standoff_hold_s, *th.min_standoff_hold_s,
        r.standoff_hold_s >= *th.min_standoff_hold_s);
  }
  if (th.min_pct_in_frame) {
    add("min_pct_in_frame", r.pct_in_frame, *th.min_pct_in_frame,
        r.acquired && r.pct_in_frame >= *th.min_pct_in_frame);
  }
  if (th.final_distance_m) {
    const double tol = th.final_distance_tol_m.value_or(0.0);
    const double err = last_distance_ ? std::abs(*last_distance_ - *th.final_distance_m)
                                      : std::numeric_limits<double>::infinity();
    add("final_distance_m", last_distance_.value_or(std::numeric_limits<double>::infinity()),
        *th.final_distance_m, err <= tol);
  }
  return r;
}

MetricsReport compute_metrics(const std::vector<TraceRecord>& rows, const MetricsSpec& spec) {
  MetricsAccumulator acc(spec);
  for (const auto& row : rows) acc.add(row);
  return acc.report();
}

namespace {

// Unset or infinite reals are written as the string "none".
void opt_real(LineWriter& w, std::string_view key, std::optional<double> v) {
  if (v && std::isfinite(*v)) {
    w.real(key, *v);
  } else {
    w.text(key, "none");
  }
}

}  // namespace

std::string metrics_line(const MetricsReport& r) {
  LineWriter w;
  w.unsigned_integer("rows", r.rows)
      .unsigned_integer("xte_samples", r.xte_samples)
      .real("xte_rms_m", r.xte_rms_m)
      .unsigned_integer("waypoints_reached", r.waypoints_reached);
  opt_real(w, "mission_time_s", r.mission_time_s);
  w.boolean("acquired", r.acquired)
      .real("acquisition_t_s", r.acquisition_t_s)
      .real("pct_in_frame", r.pct_in_frame);
  opt_real(w, "settle_time_s", r.settle_time_s);
  w.real("standoff_err_mean_m", r.standoff_err_mean_m)
      .real("standoff_err_max_m", r.standoff_err_max_m)
      .real("standoff_hold_s", r.standoff_hold_s);
  opt_real(w, "final_distance_m", r.final_distance_m);
  w.real("max_abs_rate_target_radps", r.max_abs_rate_target_radps)
      .real("max_rate_step_radps", r.max_rate_step_radps)
      .begin_array("thresholds");
  for (const auto& t : r.thresholds) {
    w.begin_element().text("name", t.name);
    opt_real(w, "value", t.value);
    w.real("limit", t.limit).boolean("pass", t.pass).end_object();
  }
  w.end_array().boolean("all_pass", r.all_pass());
  return w.finish();
}

std::string metrics_summary(const MetricsReport& r) {
  std::ostringstream out;
  auto opt = [](std::optional<double> v) {
    return v && std::isfinite(*v) ? format_real(*v) : std::string("n/a");
  };
  out << "rows               " << r.rows << '\n'
      << "xte_rms_m          " << format_real(r.xte_rms_m) << " (" << r.xte_samples
      << " samples)\n"
      << "waypoints_reached  " << r.waypoints_reached << '\n'
      << "mission_time_s     " << opt(r.mission_time_s) << '\n'
      << "acquired           " << (r.acquired ? "yes at " + format_real(r.acquisition_t_s) : "no")
      << '\n'
      << "pct_in_frame       " << format_real(r.pct_in_frame) << '\n'
      << "settle_time_s      " << opt(r.settle_time_s) << '\n'
      << "standoff_err_mean  " << format_real(r.standoff_err_mean_m) << '\n'
      << "standoff_err_max   " << format_real(r.standoff_err_max_m) << '\n'
      << "standoff_hold_s    " << format_real(r.standoff_hold_s) << '\n'
      << "final_distance_m   " << opt(r.final_distance_m) << '\n'
      << "max_rate_target    " << format_real(rad_to_deg(r.max_abs_rate_target_radps))
      << " deg/s\n"
      << "max_rate_step      " << format_real(rad_to_deg(r.max_rate_step_radps)) << " deg/s\n";
  for (const auto& t : r.thresholds) {
    out << (t.pass ? "PASS " : "FAIL ") << t.name << ": " << opt(t.value) << " vs limit "
        << format_real(t.limit) << '\n';
  }
  return out.str();
}

}  // namespace skimmer
