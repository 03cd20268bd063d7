#include "skimmer/guidance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace skimmer {

namespace {

constexpr double kDegenerateSegmentM = 1e-9;

constexpr std::array<std::pair<Mode, std::string_view>, 4> kModeNames{{
    {Mode::Manual, "manual"},
    {Mode::Hold, "hold"},
    {Mode::Auto, "auto"},
    {Mode::Follow, "follow"},
}};

Vec2 segment_unit(const Waypoint& a, const Waypoint& b, double& length) {
  const Vec2 d = b.position() - a.position();
  length = norm(d);
  if (!(length > kDegenerateSegmentM)) {
    throw GuidanceError("degenerate mission segment: consecutive waypoints coincide");
  }
  return (1.0 / length) * d;
}

void enter_mode(GuidanceState& state, Mode to, const VesselState& vessel) {
  state.mode = to;
  state.memory.rate_pid = {};
  state.memory.speed_pid = {};
  if (to == Mode::Hold) {
    state.memory.hold_heading_rad = vessel.heading_rad;
  } else if (to == Mode::Auto) {
    state.memory.leg_start = vessel.position();
  }
}

struct CascadeOutput {
  double throttle = 0.0;
  double steering = 0.0;
};

CascadeOutput run_cascade(double desired_heading, double desired_speed, const VesselState& vessel,
                          ControllerMemory& mem, const GuidanceConfig& cfg, double dt_s,
                          bool allow_reverse, Diagnostics& diag) {
  const double heading_err = wrap_angle(desired_heading - vessel.heading_rad);
  const double rate_cmd = heading_to_rate(heading_err, cfg.steering);
  mem.rate_target_radps =
      slew_limit(rate_cmd, mem.rate_target_radps, cfg.steering.acc_max_radps2, dt_s);
  const auto steer =
      rate_to_steering(mem.rate_target_radps, vessel.yaw_rate_radps, cfg.steering, mem.rate_pid, dt_s);
  mem.rate_pid = steer.pid;
  const auto thr = speed_to_throttle(desired_speed, vessel.surge_mps, cfg.speed, mem.speed_pid,
                                     dt_s, allow_reverse);
  mem.speed_pid = thr.pid;

  diag.desired_heading_rad = wrap_angle(desired_heading);
  diag.desired_speed_mps = desired_speed;
  diag.heading_err_rad = heading_err;
  diag.rate_target_radps = mem.rate_target_radps;
  return {thr.throttle, steer.steering};
}

}  // namespace

void Waypoint::validate() const {
  if (!std::isfinite(x_m) || !std::isfinite(y_m)) {
    throw GuidanceError("waypoint coordinates must be finite");
  }
  if (!std::isfinite(speed_mps) || speed_mps < 0.0) {
    throw GuidanceError("waypoint speed must be finite and >= 0");
  }
  if (!std::isfinite(accept_radius_m) || accept_radius_m <= 0.0) {
    throw GuidanceError("waypoint acceptance radius must be finite and > 0");
  }
}

void FollowPolicy::validate() const {
  if (!(standoff_m > 0.0) || !std::isfinite(standoff_m)) {
    throw GuidanceError("standoff_m must be > 0");
  }
  if (!(approach_gain >= 0.0) || !std::isfinite(approach_gain)) {
    throw GuidanceError("approach_gain must be >= 0");
  }
  if (!(max_speed_mps >= 0.0) || !std::isfinite(max_speed_mps)) {
    throw GuidanceError("max_speed_mps must be >= 0");
  }
  if (!(fov_rad > 0.0 && fov_rad < kPi)) {
    throw GuidanceError("fov must lie in (0, pi)");
  }
}

void GuidanceConfig::validate() const {
  steering.validate();
  speed.validate();
  follow.validate();
  if (!(lookahead_m > 0.0) || !std::isfinite(lookahead_m)) {
    throw GuidanceError("lookahead_m must be > 0");
  }
  if (!(track_timeout_s > 0.0) || !std::isfinite(track_timeout_s)) {
    throw GuidanceError("track_timeout_s must be > 0");
  }
}

std::string_view to_string(Mode mode) {
  for (const auto& [m, name] : kModeNames) {
    if (m == mode) return name;
  }
  return "unknown";
}

std::optional<Mode> mode_from_string(std::string_view name) {
  for (const auto& [m, n] : kModeNames) {
    if (n == name) return m;
  }
  return std::nullopt;
}

double cross_track_error(const Waypoint& seg_start, const Waypoint& seg_end, Vec2 pos) {
  double length = 0.0;
  const Vec2 u = segment_unit(seg_start, seg_end, length);
  const Vec2 d = pos - seg_start.position();
  return u.y * d.x - u.x * d.y;
}

double pursuit_heading(Vec2 pos, const Waypoint& seg_start, const Waypoint& seg_end,
                       double lookahead_m) {
  if (!(lookahead_m > 0.0)) {
    throw GuidanceError("lookahead must be > 0");
  }
  double length = 0.0;
  const Vec2 u = segment_unit(seg_start, seg_end, length);
  const double along = dot(pos - seg_start.position(), u);
  const double carrot_along = std::clamp(along + lookahead_m, 0.0, length);
  const Vec2 carrot = seg_start.position() + carrot_along * u;
  const Vec2 offset = carrot - pos;
  if (norm(offset) <= kDegenerateSegmentM) {
    return compass_of(u);
  }
  return compass_of(offset);
}

Mission advance_mission(Mission mission, Vec2 pos) {
  while (mission.current_index < mission.waypoints.size()) {
    const Waypoint& wp = mission.waypoints[mission.current_index];
    if (distance(pos, wp.position()) > wp.accept_radius_m) {
      break;
    }
    ++mission.current_index;
  }
  return mission;
}

Vec2 predict_target(const TargetTrack& track, double now_s, double max_age_s) {
  const double age = now_s - track.t_s;
  if (age > max_age_s) {
    throw TrackLost("target track is " + std::to_string(age) + " s old (limit " +
                    std::to_string(max_age_s) + " s)");
  }
  return track.position() + std::max(age, 0.0) * track.velocity();
}

FollowSetpoints follow_setpoints(const VesselState& state, const TargetTrack& track,
                                 const FollowPolicy& policy, double now_s, double max_age_s) {
  const Vec2 target = predict_target(track, now_s, max_age_s);
  const Vec2 los = target - state.position();
  const double range = norm(los);
  if (range <= kDegenerateSegmentM) {
    return {state.heading_rad, 0.0};
  }
  const Vec2 los_unit = (1.0 / range) * los;
  const double closing = dot(track.velocity(), los_unit);
  const double speed = policy.approach_gain * (range - policy.standoff_m) + closing;
  return {compass_of(los), std::clamp(speed, 0.0, policy.max_speed_mps)};
}

bool in_frame(double heading_rad, Vec2 vessel_pos, Vec2 target_pos, double fov_rad) {
  const Vec2 los = target_pos - vessel_pos;
  if (norm(los) <= 0.0) {
    throw GuidanceError("in_frame: vessel and target positions coincide");
  }
  return std::abs(wrap_angle(compass_of(los) - heading_rad)) <= fov_rad / 2.0;
}

ModeStepResult mode_step(const GuidanceState& state, const ModeInputs& inputs,
                         const GuidanceConfig& cfg, double dt_s) {
  ModeStepResult result;
  result.next = state;
  GuidanceState& next = result.next;
  Diagnostics& diag = result.diagnostics;
  const VesselState& vessel = inputs.vessel;
  const double now = vessel.t_s;

  auto drop_to = [&](Mode to, std::string reason) {
    if (next.mode == to) return;
    // Keep the first transition of the tick as the logged cause.
    if (!result.transition) {
      result.transition = ModeTransition{next.mode, to, std::move(reason)};
    } else {
      result.transition->to = to;
    }
    enter_mode(next, to, vessel);
  };

  if (inputs.failsafe) {
    drop_to(Mode::Hold, "link failsafe");
  }

  std::optional<Vec2> predicted;
  if (inputs.track) {
    try {
      predicted = predict_target(*inputs.track, now, cfg.track_timeout_s);
    } catch (const TrackLost&) {
      predicted.reset();
    }
  }
  if (predicted) {
    diag.target_valid = true;
    diag.target_pos = *predicted;
    if (distance(*predicted, vessel.position()) > 0.0) {
      diag.in_frame = in_frame(vessel.heading_rad, vessel.position(), *predicted, cfg.follow.fov_rad);
    }
  }

  if (next.mode == Mode::Manual) {
    next.memory.rate_target_radps =
        slew_limit(0.0, next.memory.rate_target_radps, cfg.steering.acc_max_radps2, dt_s);
    diag.rate_target_radps = next.memory.rate_target_radps;
    diag.desired_heading_rad = vessel.heading_rad;
    result.throttle = inputs.manual.throttle;
    result.steering = inputs.manual.steering;
    return result;
  }

  if (next.mode == Mode::Follow) {
    if (!predicted) {
      drop_to(Mode::Hold, inputs.track ? "target track lost" : "no target track");
    } else {
      const auto sp = follow_setpoints(vessel, *inputs.track, cfg.follow, now, cfg.track_timeout_s);
      const auto out = run_cascade(sp.heading_rad, sp.speed_mps, vessel, next.memory, cfg, dt_s,
                                   /*allow_reverse=*/false, diag);
      result.throttle = out.throttle;
      result.steering = out.steering;
      return result;
    }
  }

  if (next.mode == Mode::Auto) {
    Mission advanced = advance_mission(next.mission, vessel.position());
    if (advanced.current_index != next.mission.current_index && advanced.current_index > 0) {
      next.memory.leg_start = advanced.waypoints[advanced.current_index - 1].position();
    }
    next.mission = std::move(advanced);
    if (next.mission.complete()) {
      drop_to(Mode::Hold, next.mission.waypoints.empty() ? "no mission" : "mission complete");
    } else {
      const Waypoint& target = next.mission.waypoints[next.mission.current_index];
      Waypoint start;
      start.x_m = next.memory.leg_start.x;
      start.y_m = next.memory.leg_start.y;
      double desired_heading = 0.0;
      if (distance(start.position(), target.position()) > kDegenerateSegmentM) {
        desired_heading = pursuit_heading(vessel.position(), start, target, cfg.lookahead_m);
        diag.xte_m = cross_track_error(start, target, vessel.position());
        diag.xte_valid = true;
      } else {
        desired_heading = compass_of(target.position() - vessel.position());
      }
      const auto out = run_cascade(desired_heading, target.speed_mps, vessel, next.memory, cfg,
                                   dt_s, /*allow_reverse=*/false, diag);
      result.throttle = out.throttle;
      result.steering = out.steering;
      return result;
    }
  }

  // Hold
  const auto out = run_cascade(next.memory.hold_heading_rad, 0.0, vessel, next.memory, cfg, dt_s,
                               /*allow_reverse=*/true, diag);
  result.throttle = out.throttle;
  result.steering = out.steering;
  return result;
}

ModeRequestResult request_mode(const GuidanceState& state, Mode requested,
                               const VesselState& vessel, bool failsafe_active,
                               const std::optional<TargetTrack>& track, const GuidanceConfig& cfg) {
  ModeRequestResult result;
  result.next = state;
  if (requested == state.mode) {
    result.accepted = true;
    return result;
  }
  if (failsafe_active && requested != Mode::Hold) {
    result.reason = "failsafe active";
    return result;
  }
  if (requested == Mode::Auto && state.mission.complete()) {
    result.reason = "no active mission";
    return result;
  }
  if (requested == Mode::Follow) {
    bool fresh = false;
    if (track) {
      try {
        predict_target(*track, vessel.t_s, cfg.track_timeout_s);
        fresh = true;
      } catch (const TrackLost&) {
      }
    }
    if (!fresh) {
      result.reason = "no fresh target track";
      return result;
    }
  }
  result.accepted = true;
  result.transition = ModeTransition{state.mode, requested, "operator request"};
  enter_mode(result.next, requested, vessel);
  return result;
}

GuidanceState load_mission(const GuidanceState& state, std::vector<Waypoint> waypoints,
                           Vec2 vessel_pos) {
  if (waypoints.empty()) {
    throw GuidanceError("mission has no waypoints");
  }
  for (const auto& wp : waypoints) {
    wp.validate();
  }
  GuidanceState next = state;
  next.mission = Mission{std::move(waypoints), 0};
  next.memory.leg_start = vessel_pos;
  return next;
}

}  // namespace skimmer
