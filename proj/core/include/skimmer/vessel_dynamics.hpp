#pragma once

// Planar twin-thruster surface vessel: surge and yaw only (sway neglected).
//
// Frame conventions used throughout the library:
//   x_m  east, y_m north (local tangent plane, meters)
//   heading_rad compass style: 0 = north, increases clockwise, kept in [-pi, pi)
//   positive yaw rate / positive steering turn the bow to starboard (right)

#include <cstdint>
#include <random>
#include <stdexcept>

#include "skimmer/geometry.hpp"

namespace skimmer {

struct VesselState {
  double x_m = 0.0;
  double y_m = 0.0;
  double heading_rad = 0.0;
  double surge_mps = 0.0;
  double yaw_rate_radps = 0.0;
  double t_s = 0.0;

  Vec2 position() const { return {x_m, y_m}; }
  friend bool operator==(const VesselState&, const VesselState&) = default;
};

/// Normalized per-thruster commands, each in [-1, 1].
struct ThrusterPair {
  double left = 0.0;
  double right = 0.0;

  friend bool operator==(const ThrusterPair&, const ThrusterPair&) = default;
};

struct VesselParams {
  double mass_kg = 6.0;
  double yaw_inertia_kgm2 = 0.5;
  double max_thrust_n = 15.0;  // per thruster at command 1.0
  double thruster_offset_m = 0.25;
  double drag_lin_surge = 0.5;
  double drag_quad_surge = 8.0;
  double drag_lin_yaw = 0.5;
  double drag_quad_yaw = 0.5;

  /// Throws InvalidParams if any physical quantity is out of range.
  void validate() const;
  friend bool operator==(const VesselParams&, const VesselParams&) = default;
};

/// Ambient disturbance description. Disturbances are zero-mean Gaussian and
/// reproducible from `seed`.
struct EnvironmentModel {
  Vec2 current_mps{};
  double yaw_disturbance_std = 0.0;    // N*m
  double surge_disturbance_std = 0.0;  // N
  std::uint64_t seed = 1;

  void validate() const;
  friend bool operator==(const EnvironmentModel&, const EnvironmentModel&) = default;
};

struct DisturbanceSample {
  double surge_n = 0.0;
  double yaw_nm = 0.0;
};

/// Seeded per-step disturbance generator for one EnvironmentModel.
///
/// The force draw is scaled by 1/sqrt(dt) so that the velocity increment it
/// produces has variance proportional to dt, i.e. the disturbance behaves like
/// white noise whose effect does not depend on the chosen step size.
class DisturbanceSource {
 public:
  explicit DisturbanceSource(const EnvironmentModel& env);

  DisturbanceSample draw(double dt_s);

 private:
  double surge_std_;
  double yaw_std_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> unit_{0.0, 1.0};
};

class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidTimeStep : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kMaxStepS = 0.1;

/// Differential mixing. Positive steering makes left > right, turning right.
ThrusterPair mix_thrust(double throttle, double steering);

struct ForcesAndMoments {
  double surge_force_n = 0.0;
  double yaw_moment_nm = 0.0;
};

ForcesAndMoments forces_and_moments(const VesselState& state, const ThrusterPair& thr,
                                    const VesselParams& params,
                                    const DisturbanceSample& disturbance);

/// Semi-implicit Euler step: rates first, then heading, then position along
/// the new heading plus the ambient current. Requires 0 < dt_s <= kMaxStepS.
VesselState step(const VesselState& state, const ThrusterPair& thr, const VesselParams& params,
                 const EnvironmentModel& env, DisturbanceSource& disturbance, double dt_s);

/// Drag-balance surge speed for equal thrust `command` on both thrusters in
/// calm water. Used as the sanity cap on reachable speed.
double terminal_speed(const VesselParams& params, double command = 1.0);

}  // namespace skimmer
