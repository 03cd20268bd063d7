#pragma once

// Scenario description: everything a headless run needs, loaded from the
// sectioned config format (see config.hpp). Angles are stored in radians and
// written in degrees in the config text.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "skimmer/config.hpp"
#include "skimmer/guidance.hpp"
#include "skimmer/link.hpp"
#include "skimmer/vessel_dynamics.hpp"

namespace skimmer {

struct TargetPoint {
  double t_s = 0.0;
  Vec2 pos{};
  friend bool operator==(const TargetPoint&, const TargetPoint&) = default;
};

/// Piecewise-linear target trajectory. Before the first point the target sits
/// at the first point; after the last it stays at the last.
struct TargetScript {
  std::vector<TargetPoint> points;
  double noise_std_m = 0.0;  // Gaussian noise on reported positions
  std::uint64_t noise_seed = 0;

  bool present() const { return !points.empty(); }
  Vec2 position_at(double t_s) const;
  Vec2 velocity_at(double t_s) const;
  friend bool operator==(const TargetScript&, const TargetScript&) = default;
};

/// Timed operator action, delivered through the simulated uplink.
struct ScenarioEvent {
  enum class Kind { SetMode, Manual, HeartbeatOff, HeartbeatOn };
  double t_s = 0.0;
  Kind kind = Kind::SetMode;
  Mode mode = Mode::Hold;
  ManualCommand manual;

  friend bool operator==(const ScenarioEvent&, const ScenarioEvent&) = default;
};

/// Pass/fail limits. Unset limits are not evaluated.
struct Thresholds {
  std::optional<std::uint64_t> min_waypoints_reached;
  std::optional<double> max_mission_time_s;
  std::optional<double> max_xte_rms_m;
  std::optional<double> standoff_m;  // defaults to the follow policy standoff
  std::optional<double> standoff_tol_m;
  std::optional<double> min_standoff_hold_s;
  std::optional<double> min_pct_in_frame;
  std::optional<double> final_distance_m;
  std::optional<double> final_distance_tol_m;

  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

struct LinkSetup {
  LinkModel model;
  Vec2 gcs_pos{};
  double heartbeat_period_s = 1.0;
  double failsafe_timeout_s = kDefaultFailsafeTimeoutS;
  double report_period_s = 0.1;

  friend bool operator==(const LinkSetup&, const LinkSetup&) = default;
};

struct Scenario {
  std::string name;
  double duration_s = 60.0;
  double dt_s = 0.02;
  std::uint64_t seed = 1;
  Mode initial_mode = Mode::Hold;

  VesselParams vessel;
  EnvironmentModel environment;
  GuidanceConfig guidance;
  LinkSetup link;
  VesselState initial;
  std::vector<Waypoint> mission;
  TargetScript target;
  std::vector<ScenarioEvent> events;  // sorted by time, stable
  Thresholds thresholds;

  /// Throws ConfigError on any invalid value.
  void validate() const;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Overrides the master seed and every seed derived from it
/// (environment = seed, link = seed + 1, target noise = seed + 2).
void apply_seed(Scenario& scenario, std::uint64_t seed);

Scenario scenario_from_config(const ConfigFile& cfg);
Scenario parse_scenario(const std::string& text, const std::string& origin,
                        const IncludeResolver& resolver);
Scenario load_scenario_file(const std::filesystem::path& path);

/// Self-contained config text (no includes) that parses back to `scenario`.
std::string format_scenario(const Scenario& scenario);

std::vector<std::string> builtin_scenario_names();
/// Throws ConfigError for an unknown name.
Scenario builtin_scenario(const std::string& name);
/// Bundled config text for `name`, as shipped.
std::string builtin_scenario_text(const std::string& name);

/// Loads `ref` as a file when it exists, otherwise as a bundled scenario name.
Scenario load_scenario(const std::string& ref);

}  // namespace skimmer
