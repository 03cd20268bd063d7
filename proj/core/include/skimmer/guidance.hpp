#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "skimmer/geometry.hpp"
#include "skimmer/steering_control.hpp"
#include "skimmer/vessel_dynamics.hpp"

namespace skimmer {

struct Waypoint {
  double x_m = 0.0;
  double y_m = 0.0;
  double speed_mps = 1.0;
  double accept_radius_m = 5.0;

  Vec2 position() const { return {x_m, y_m}; }
  /// Throws GuidanceError unless coordinates are finite, speed >= 0 and radius > 0.
  void validate() const;
  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

struct Mission {
  std::vector<Waypoint> waypoints;
  std::size_t current_index = 0;  // == waypoints.size() once complete

  bool complete() const { return current_index >= waypoints.size(); }
  friend bool operator==(const Mission&, const Mission&) = default;
};

struct TargetTrack {
  double x_m = 0.0;
  double y_m = 0.0;
  double vx_mps = 0.0;
  double vy_mps = 0.0;
  double t_s = 0.0;

  Vec2 position() const { return {x_m, y_m}; }
  Vec2 velocity() const { return {vx_mps, vy_mps}; }
  friend bool operator==(const TargetTrack&, const TargetTrack&) = default;
};

struct FollowPolicy {
  double standoff_m = 10.0;
  double approach_gain = 0.3;  // m/s of speed per meter of standoff error
  double max_speed_mps = 3.0;
  double fov_rad = deg_to_rad(60.0);  // camera fixed to hull, boresight = heading

  void validate() const;
  friend bool operator==(const FollowPolicy&, const FollowPolicy&) = default;
};

enum class Mode { Manual, Hold, Auto, Follow };

std::string_view to_string(Mode mode);
std::optional<Mode> mode_from_string(std::string_view name);

class GuidanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a target track is older than the configured limit.
class TrackLost : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Signed perpendicular distance from `pos` to the line through the segment,
/// positive when `pos` is to the right of the start->end direction.
double cross_track_error(const Waypoint& seg_start, const Waypoint& seg_end, Vec2 pos);

/// Pure-pursuit heading toward the carrot point `lookahead_m` ahead of the
/// projection of `pos` on the segment, the carrot clamped to the segment.
double pursuit_heading(Vec2 pos, const Waypoint& seg_start, const Waypoint& seg_end,
                       double lookahead_m);

/// Advances past every consecutive waypoint whose acceptance radius contains `pos`.
Mission advance_mission(Mission mission, Vec2 pos);

inline constexpr double kDefaultTrackTimeoutS = 2.0;

/// Constant-velocity extrapolation. Throws TrackLost when now - t_s > max_age_s.
Vec2 predict_target(const TargetTrack& track, double now_s,
                    double max_age_s = kDefaultTrackTimeoutS);

struct FollowSetpoints {
  double heading_rad = 0.0;
  double speed_mps = 0.0;
};

FollowSetpoints follow_setpoints(const VesselState& state, const TargetTrack& track,
                                 const FollowPolicy& policy, double now_s,
                                 double max_age_s = kDefaultTrackTimeoutS);

/// True when the target bearing lies within half the field of view of `heading`.
/// Throws GuidanceError when the positions coincide.
bool in_frame(double heading_rad, Vec2 vessel_pos, Vec2 target_pos, double fov_rad);

struct GuidanceConfig {
  SteeringConfig steering;
  SpeedConfig speed;
  FollowPolicy follow;
  double lookahead_m = 5.0;
  double track_timeout_s = kDefaultTrackTimeoutS;

  void validate() const;
  friend bool operator==(const GuidanceConfig&, const GuidanceConfig&) = default;
};

struct ManualCommand {
  double throttle = 0.0;
  double steering = 0.0;
  friend bool operator==(const ManualCommand&, const ManualCommand&) = default;
};

/// Controller memory carried between ticks.
struct ControllerMemory {
  PidState rate_pid;
  PidState speed_pid;
  double rate_target_radps = 0.0;  // slew-limited output of the angle loop
  double hold_heading_rad = 0.0;
  Vec2 leg_start{};
};

struct GuidanceState {
  Mode mode = Mode::Hold;
  Mission mission;
  ControllerMemory memory;
};

struct ModeInputs {
  VesselState vessel;
  ManualCommand manual;
  std::optional<TargetTrack> track;
  bool failsafe = false;
};

struct Diagnostics {
  double desired_heading_rad = 0.0;
  double desired_speed_mps = 0.0;
  double rate_target_radps = 0.0;
  double heading_err_rad = 0.0;
  double xte_m = 0.0;
  bool xte_valid = false;
  bool target_valid = false;
  Vec2 target_pos{};
  bool in_frame = false;
};

struct ModeTransition {
  Mode from = Mode::Hold;
  Mode to = Mode::Hold;
  std::string reason;
};

struct ModeStepResult {
  double throttle = 0.0;
  double steering = 0.0;
  GuidanceState next;
  Diagnostics diagnostics;
  std::optional<ModeTransition> transition;
};

/// One guidance/control tick. Manual passes the operator command through;
/// Hold keeps the entry heading at zero speed; Auto follows the mission with
/// pure pursuit; Follow tracks the target. Failsafe, loss of track and mission
/// completion drop to Hold within the same tick.
ModeStepResult mode_step(const GuidanceState& state, const ModeInputs& inputs,
                         const GuidanceConfig& cfg, double dt_s);

struct ModeRequestResult {
  bool accepted = false;
  std::string reason;  // why the request was refused, empty when accepted
  GuidanceState next;
  std::optional<ModeTransition> transition;
};

/// Operator-requested mode change. Every (from, to) pair is defined: while the
/// failsafe is active only Hold is accepted; Auto needs an unfinished mission;
/// Follow needs a fresh track.
ModeRequestResult request_mode(const GuidanceState& state, Mode requested,
                               const VesselState& vessel, bool failsafe_active,
                               const std::optional<TargetTrack>& track, const GuidanceConfig& cfg);

/// Replaces the mission (validated) and restarts it from the vessel position.
GuidanceState load_mission(const GuidanceState& state, std::vector<Waypoint> waypoints,
                           Vec2 vessel_pos);

}  // namespace skimmer
