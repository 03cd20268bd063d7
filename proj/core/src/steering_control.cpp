#include "skimmer/steering_control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "skimmer/vessel_dynamics.hpp"

namespace skimmer {

double wrap_angle(double angle_rad) {
  double wrapped = angle_rad - kTwoPi * std::floor((angle_rad + kPi) / kTwoPi);
  // Rounding can land exactly on the excluded upper bound.
  if (wrapped >= kPi) {
    wrapped -= kTwoPi;
  }
  if (wrapped < -kPi) {
    wrapped = -kPi;
  }
  return wrapped;
}

void PidGains::validate() const {
  if (!(kp >= 0.0) || !(ki >= 0.0) || !(kd >= 0.0) || !std::isfinite(kp) || !std::isfinite(ki) ||
      !std::isfinite(kd)) {
    throw InvalidParams("PID gains must be finite and >= 0");
  }
}

void SteeringConfig::validate() const {
  rat_gains.validate();
  if (!(ang_p > 0.0) || !std::isfinite(ang_p)) throw InvalidParams("ang_p must be > 0");
  if (!(rat_max_radps > 0.0) || !std::isfinite(rat_max_radps)) {
    throw InvalidParams("rat_max must be > 0");
  }
  if (!(acc_max_radps2 > 0.0) || !std::isfinite(acc_max_radps2)) {
    throw InvalidParams("acc_max must be > 0");
  }
  if (!(integ_limit >= 0.0) || !std::isfinite(integ_limit)) {
    throw InvalidParams("integ_limit must be >= 0");
  }
}

void SpeedConfig::validate() const {
  gains.validate();
  if (!(integ_limit >= 0.0) || !std::isfinite(integ_limit)) {
    throw InvalidParams("speed integ_limit must be >= 0");
  }
}

PidResult pid_step(const PidGains& gains, const PidState& state, double error, double dt_s,
                   double integ_limit) {
  if (!(dt_s > 0.0)) {
    throw InvalidTimeStep("pid_step requires dt > 0");
  }
  PidResult result;
  result.state.integral = std::clamp(state.integral + error * dt_s, -integ_limit, integ_limit);
  const double derivative = state.initialized ? (error - state.prev_error) / dt_s : 0.0;
  result.state.prev_error = error;
  result.state.initialized = true;
  result.output = gains.kp * error + gains.ki * result.state.integral + gains.kd * derivative;
  return result;
}

PidResult saturating_pid_step(const PidGains& gains, const PidState& state, double error,
                              double dt_s, double integ_limit, double out_min, double out_max) {
  PidResult result = pid_step(gains, state, error, dt_s, integ_limit);
  if (result.output > out_max || result.output < out_min) {
    const double advanced = result.state.integral;
    result.state.integral = std::clamp(state.integral, -integ_limit, integ_limit);
    result.output += gains.ki * (result.state.integral - advanced);
    result.output = std::clamp(result.output, out_min, out_max);
  }
  return result;
}

double heading_to_rate(double heading_err_rad, const SteeringConfig& cfg) {
  return std::clamp(cfg.ang_p * heading_err_rad, -cfg.rat_max_radps, cfg.rat_max_radps);
}

double slew_limit(double desired_rate, double prev_target, double acc_max_radps2, double dt_s) {
  if (!(dt_s > 0.0)) {
    throw InvalidTimeStep("slew_limit requires dt > 0");
  }
  const double max_delta = acc_max_radps2 * dt_s;
  return prev_target + std::clamp(desired_rate - prev_target, -max_delta, max_delta);
}

SteeringResult rate_to_steering(double target_rate, double measured_rate,
                                const SteeringConfig& cfg, const PidState& pid, double dt_s) {
  const auto r = saturating_pid_step(cfg.rat_gains, pid, target_rate - measured_rate, dt_s,
                                     cfg.integ_limit, -1.0, 1.0);
  return {r.output, r.state};
}

ThrottleResult speed_to_throttle(double target_speed, double measured_speed,
                                 const SpeedConfig& cfg, const PidState& pid, double dt_s,
                                 bool allow_reverse) {
  const auto r = saturating_pid_step(cfg.gains, pid, target_speed - measured_speed, dt_s,
                                     cfg.integ_limit, allow_reverse ? -1.0 : 0.0, 1.0);
  return {r.output, r.state};
}

}  // namespace skimmer
