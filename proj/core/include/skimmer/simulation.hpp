#pragma once

// Fixed-step scenario simulation: target script, guidance and control,
// dynamics, and both directions of the simulated radio link, with a scripted
// ground station that sends the scenario's timed events and 1 Hz heartbeats.
//
// One tick, in order:
//   1. target truth and track update
//   2. failsafe check against the last heartbeat received
//   3. mode_step (setpoints, cascades, forced transitions)
//   4. thrust mixing and one dynamics step
//   5. ground-station sends (events, heartbeats, queued messages), then
//      uplink delivery and command handling on the vessel
//   6. state reports down the link, downlink delivery to the ground station
//   7. one trace row

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "skimmer/guidance.hpp"
#include "skimmer/link.hpp"
#include "skimmer/scenario.hpp"
#include "skimmer/telemetry.hpp"
#include "skimmer/trace.hpp"

namespace skimmer {

struct LoggedTransition {
  double t_s = 0.0;
  Mode from = Mode::Hold;
  Mode to = Mode::Hold;
  std::string reason;
};

class Simulation {
 public:
  /// Validates the scenario, loads its mission and enters the initial mode.
  explicit Simulation(Scenario scenario);

  /// Number of ticks the scenario duration covers.
  std::uint64_t total_ticks() const { return total_ticks_; }
  std::uint64_t ticks_done() const { return ticks_; }
  bool finished() const { return ticks_ >= total_ticks_; }

  /// Advances one tick and returns its trace row.
  TraceRecord tick();

  /// Queues a ground-station message; it is stamped with the ground-station
  /// sequence number and sent over the uplink during the next tick.
  void gcs_send(TelemetryMessage msg);
  /// Drains every message the ground station has received so far.
  std::vector<TelemetryMessage> gcs_receive();
  /// Stops the scripted heartbeats for good (a live operator took over).
  void disable_scripted_heartbeat();

  const Scenario& scenario() const { return scenario_; }
  const VesselState& vessel() const { return vessel_; }
  const GuidanceState& guidance() const { return guidance_; }
  bool failsafe() const { return failsafe_; }
  double last_heartbeat_s() const { return last_heartbeat_s_; }
  const std::vector<LoggedTransition>& transitions() const { return transitions_; }
  /// Operator requests refused by the vessel, with reasons.
  const std::vector<LoggedTransition>& refusals() const { return refusals_; }

 private:
  void update_track(double now);
  void log(double t, const ModeTransition& tr);
  void handle_uplink(const TelemetryMessage& msg, double now);
  void send_down(TelemetryMessage msg, double now);

  Scenario scenario_;
  std::uint64_t total_ticks_ = 0;
  std::uint64_t ticks_ = 0;

  VesselState vessel_;
  DisturbanceSource disturbance_;
  GuidanceState guidance_;
  ManualCommand manual_;
  std::optional<TargetTrack> track_;
  std::mt19937_64 noise_rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};

  LinkChannel<TelemetryMessage> uplink_;
  LinkChannel<TelemetryMessage> downlink_;
  SequenceCounter gcs_seq_;
  SequenceCounter vessel_seq_;
  std::vector<TelemetryMessage> gcs_outbox_;
  std::vector<TelemetryMessage> gcs_inbox_;

  std::size_t next_event_ = 0;
  bool scripted_heartbeat_ = true;
  bool heartbeat_on_ = true;
  double next_heartbeat_s_ = 0.0;
  double next_report_s_ = 0.0;
  double last_heartbeat_s_ = 0.0;
  bool failsafe_ = false;

  Diagnostics last_diag_;
  std::vector<LoggedTransition> transitions_;
  std::vector<LoggedTransition> refusals_;
};

}  // namespace skimmer
