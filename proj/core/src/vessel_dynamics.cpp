#include "skimmer/vessel_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skimmer/steering_control.hpp"

namespace skimmer {

namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw InvalidParams(std::string(name) + " must be finite and > 0");
  }
}

void require_non_negative(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    throw InvalidParams(std::string(name) + " must be finite and >= 0");
  }
}

}  // namespace

void VesselParams::validate() const {
  require_positive(mass_kg, "mass_kg");
  require_positive(yaw_inertia_kgm2, "yaw_inertia_kgm2");
  require_positive(max_thrust_n, "max_thrust_n");
  require_positive(thruster_offset_m, "thruster_offset_m");
  require_non_negative(drag_lin_surge, "drag_lin_surge");
  require_non_negative(drag_quad_surge, "drag_quad_surge");
  require_non_negative(drag_lin_yaw, "drag_lin_yaw");
  require_non_negative(drag_quad_yaw, "drag_quad_yaw");
  // Either drag term may be zero, but not both: speeds must stay bounded.
  if (drag_lin_surge + drag_quad_surge <= 0.0) {
    throw InvalidParams("surge drag (drag_lin_surge + drag_quad_surge) must be > 0");
  }
  if (drag_lin_yaw + drag_quad_yaw <= 0.0) {
    throw InvalidParams("yaw drag (drag_lin_yaw + drag_quad_yaw) must be > 0");
  }
}

void EnvironmentModel::validate() const {
  if (!std::isfinite(current_mps.x) || !std::isfinite(current_mps.y)) {
    throw InvalidParams("current must be finite");
  }
  require_non_negative(yaw_disturbance_std, "yaw_disturbance_std");
  require_non_negative(surge_disturbance_std, "surge_disturbance_std");
}

DisturbanceSource::DisturbanceSource(const EnvironmentModel& env)
    : surge_std_(env.surge_disturbance_std), yaw_std_(env.yaw_disturbance_std), engine_(env.seed) {}

DisturbanceSample DisturbanceSource::draw(double dt_s) {
  if (surge_std_ == 0.0 && yaw_std_ == 0.0) {
    return {};
  }
  const double scale = 1.0 / std::sqrt(dt_s);
  DisturbanceSample sample;
  sample.surge_n = surge_std_ * scale * unit_(engine_);
  sample.yaw_nm = yaw_std_ * scale * unit_(engine_);
  return sample;
}

ThrusterPair mix_thrust(double throttle, double steering) {
  const double t = std::clamp(throttle, -1.0, 1.0);
  const double s = std::clamp(steering, -1.0, 1.0);
  return {std::clamp(t + s, -1.0, 1.0), std::clamp(t - s, -1.0, 1.0)};
}

ForcesAndMoments forces_and_moments(const VesselState& state, const ThrusterPair& thr,
                                    const VesselParams& params,
                                    const DisturbanceSample& disturbance) {
  const double v = state.surge_mps;
  const double r = state.yaw_rate_radps;
  ForcesAndMoments out;
  out.surge_force_n = (thr.left + thr.right) * params.max_thrust_n - params.drag_lin_surge * v -
                      params.drag_quad_surge * v * std::abs(v) + disturbance.surge_n;
  out.yaw_moment_nm = (thr.left - thr.right) * params.max_thrust_n * params.thruster_offset_m -
                      params.drag_lin_yaw * r - params.drag_quad_yaw * r * std::abs(r) +
                      disturbance.yaw_nm;
  return out;
}

VesselState step(const VesselState& state, const ThrusterPair& thr, const VesselParams& params,
                 const EnvironmentModel& env, DisturbanceSource& disturbance, double dt_s) {
  if (!(dt_s > 0.0) || dt_s > kMaxStepS) {
    throw InvalidTimeStep("time step must satisfy 0 < dt <= " + std::to_string(kMaxStepS) +
                          " s, got " + std::to_string(dt_s));
  }
  const ThrusterPair clamped{std::clamp(thr.left, -1.0, 1.0), std::clamp(thr.right, -1.0, 1.0)};
  const auto fm = forces_and_moments(state, clamped, params, disturbance.draw(dt_s));

  VesselState next = state;
  next.surge_mps = state.surge_mps + dt_s * fm.surge_force_n / params.mass_kg;
  next.yaw_rate_radps = state.yaw_rate_radps + dt_s * fm.yaw_moment_nm / params.yaw_inertia_kgm2;
  next.heading_rad = wrap_angle(state.heading_rad + dt_s * next.yaw_rate_radps);

  const Vec2 velocity = next.surge_mps * heading_vector(next.heading_rad) + env.current_mps;
  next.x_m = state.x_m + dt_s * velocity.x;
  next.y_m = state.y_m + dt_s * velocity.y;
  next.t_s = state.t_s + dt_s;
  return next;
}

double terminal_speed(const VesselParams& params, double command) {
  const double force = 2.0 * params.max_thrust_n * std::abs(command);
  const double lin = params.drag_lin_surge;
  const double quad = params.drag_quad_surge;
  double speed = 0.0;
  if (quad == 0.0) {
    speed = force / lin;
  } else {
    // quad*v^2 + lin*v - force = 0, positive root.
    speed = (-lin + std::sqrt(lin * lin + 4.0 * quad * force)) / (2.0 * quad);
  }
  return command < 0.0 ? -speed : speed;
}

}  // namespace skimmer
