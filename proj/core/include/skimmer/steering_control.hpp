#pragma once

// Steering cascade: heading error -> (angle P) -> desired turn rate -> (slew
// limit) -> rate PID -> steering command. Speed uses a separate PI loop built
// on the same pid_step primitive.

#include "skimmer/geometry.hpp"

namespace skimmer {

/// Normalizes an angle to [-pi, pi).
double wrap_angle(double angle_rad);

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;

  void validate() const;
  friend bool operator==(const PidGains&, const PidGains&) = default;
};

struct PidState {
  double integral = 0.0;
  double prev_error = 0.0;
  bool initialized = false;  // false until the first step; suppresses derivative kick

  friend bool operator==(const PidState&, const PidState&) = default;
};

struct PidResult {
  double output = 0.0;
  PidState state;
};

/// One step of the discrete PID law
///   u = kp*e + ki*I + kd*(e - e_prev)/dt,  I = clamp(I_prev + e*dt, +-integ_limit).
/// The derivative term is zero on the first call.
PidResult pid_step(const PidGains& gains, const PidState& state, double error, double dt_s,
                   double integ_limit);

/// pid_step with an output range. When the unfrozen output leaves
/// [out_min, out_max] the integral keeps its previous value for this step
/// (conditional anti-windup) and the output is clamped.
PidResult saturating_pid_step(const PidGains& gains, const PidState& state, double error,
                              double dt_s, double integ_limit, double out_min, double out_max);

struct SteeringConfig {
  double ang_p = 1.0;                           // ATC_STR_ANG_P
  PidGains rat_gains{0.2, 0.2, 0.02};           // ATC_STR_RAT_P (ours), _RAT_I, _RAT_D
  double rat_max_radps = deg_to_rad(30.0);      // ATC_STR_RAT_MAX, 30 deg/s
  double acc_max_radps2 = deg_to_rad(120.0);    // ATC_STR_ACC_MAX, read as 120 deg/s^2
  double integ_limit = 0.3;

  void validate() const;
  friend bool operator==(const SteeringConfig&, const SteeringConfig&) = default;
};

struct SpeedConfig {
  PidGains gains{0.5, 0.3, 0.0};
  double integ_limit = 3.0;

  void validate() const;
  friend bool operator==(const SpeedConfig&, const SpeedConfig&) = default;
};

/// Angle loop: clamp(ang_p * heading_err, +-rat_max).
double heading_to_rate(double heading_err_rad, const SteeringConfig& cfg);

/// Moves `prev_target` toward `desired_rate` by at most acc_max * dt.
double slew_limit(double desired_rate, double prev_target, double acc_max_radps2, double dt_s);

struct SteeringResult {
  double steering = 0.0;  // in [-1, 1]
  PidState pid;
};

SteeringResult rate_to_steering(double target_rate, double measured_rate,
                                const SteeringConfig& cfg, const PidState& pid, double dt_s);

struct ThrottleResult {
  double throttle = 0.0;
  PidState pid;
};

/// PI speed loop. `allow_reverse = false` floors the throttle at 0 and applies
/// the same anti-windup rule at that floor.
ThrottleResult speed_to_throttle(double target_speed, double measured_speed,
                                 const SpeedConfig& cfg, const PidState& pid, double dt_s,
                                 bool allow_reverse = true);

}  // namespace skimmer
