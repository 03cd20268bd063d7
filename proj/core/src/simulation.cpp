#include "skimmer/simulation.hpp"

#include <cmath>
#include <utility>

namespace skimmer {

namespace {

constexpr double kTimeEps = 1e-9;

// Uplink and downlink draw from separate streams of the link seed.
constexpr std::uint64_t kUplinkStream = 0;
constexpr std::uint64_t kDownlinkStream = 1;

}  // namespace

Simulation::Simulation(Scenario scenario)
    : scenario_(std::move(scenario)),
      disturbance_((scenario_.validate(), scenario_.environment)),
      noise_rng_(scenario_.target.noise_seed),
      uplink_(scenario_.link.model, kUplinkStream),
      downlink_(scenario_.link.model, kDownlinkStream) {
  total_ticks_ = static_cast<std::uint64_t>(std::llround(scenario_.duration_s / scenario_.dt_s));
  vessel_ = scenario_.initial;
  vessel_.t_s = 0.0;
  vessel_.heading_rad = wrap_angle(vessel_.heading_rad);
  guidance_.memory.hold_heading_rad = vessel_.heading_rad;
  guidance_.memory.leg_start = vessel_.position();
  if (!scenario_.mission.empty()) {
    guidance_ = load_mission(guidance_, scenario_.mission, vessel_.position());
  }
  update_track(0.0);
  if (scenario_.initial_mode != guidance_.mode) {
    const auto req = request_mode(guidance_, scenario_.initial_mode, vessel_, false, track_,
                                  scenario_.guidance);
    if (!req.accepted) {
      throw ConfigError("scenario '" + scenario_.name + "': cannot start in mode " +
                        std::string(to_string(scenario_.initial_mode)) + ": " + req.reason);
    }
    guidance_ = req.next;
    if (req.transition) log(0.0, *req.transition);
  }
}

void Simulation::update_track(double now) {
  const TargetScript& script = scenario_.target;
  if (!script.present()) return;
  Vec2 pos = script.position_at(now);
  if (script.noise_std_m > 0.0) {
    pos.x += script.noise_std_m * noise_(noise_rng_);
    pos.y += script.noise_std_m * noise_(noise_rng_);
  }
  const Vec2 vel = script.velocity_at(now);
  track_ = TargetTrack{pos.x, pos.y, vel.x, vel.y, now};
}

void Simulation::log(double t, const ModeTransition& tr) {
  transitions_.push_back({t, tr.from, tr.to, tr.reason});
}

void Simulation::gcs_send(TelemetryMessage msg) {
  set_sequence(msg, gcs_seq_.next());
  gcs_outbox_.push_back(std::move(msg));
}

std::vector<TelemetryMessage> Simulation::gcs_receive() { return std::exchange(gcs_inbox_, {}); }

void Simulation::disable_scripted_heartbeat() { scripted_heartbeat_ = false; }

void Simulation::send_down(TelemetryMessage msg, double now) {
  set_sequence(msg, vessel_seq_.next());
  downlink_.send(std::move(msg), vessel_.position(), scenario_.link.gcs_pos, now);
}

void Simulation::handle_uplink(const TelemetryMessage& msg, double now) {
  const double timeout = scenario_.link.failsafe_timeout_s;
  if (const auto* hb = std::get_if<Heartbeat>(&msg)) {
    (void)hb;
    last_heartbeat_s_ = now;
  } else if (const auto* sm = std::get_if<SetMode>(&msg)) {
    const bool fs = failsafe_check(last_heartbeat_s_, now, timeout);
    const auto req = request_mode(guidance_, sm->mode, vessel_, fs, track_, scenario_.guidance);
    if (req.accepted) {
      guidance_ = req.next;
      if (req.transition) log(now, *req.transition);
    } else {
      refusals_.push_back({now, guidance_.mode, sm->mode, req.reason});
    }
  } else if (const auto* cm = std::get_if<CommandManual>(&msg)) {
    manual_ = ManualCommand{cm->throttle, cm->steering};
  } else if (const auto* up = std::get_if<MissionUpload>(&msg)) {
    MissionAck ack;
    ack.count = up->waypoints.size();
    try {
      guidance_ = load_mission(guidance_, up->waypoints, vessel_.position());
      ack.ok = true;
    } catch (const GuidanceError& e) {
      ack.ok = false;
      ack.reason = e.what();
    }
    send_down(ack, now);
  } else if (const auto* tr = std::get_if<TargetReport>(&msg)) {
    if (!scenario_.target.present()) {
      track_ = TargetTrack{tr->x_m, tr->y_m, tr->vx_mps, tr->vy_mps, tr->t_s};
    }
  }
  // Reports, acks and authority notices are vessel-to-ground only; ignore them here.
}

TraceRecord Simulation::tick() {
  const double dt = scenario_.dt_s;
  const double now = vessel_.t_s;
  const LinkSetup& link = scenario_.link;

  update_track(now);
  failsafe_ = failsafe_check(last_heartbeat_s_, now, link.failsafe_timeout_s);

  ModeInputs inputs{vessel_, manual_, track_, failsafe_};
  ModeStepResult ms = mode_step(guidance_, inputs, scenario_.guidance, dt);
  guidance_ = std::move(ms.next);
  if (ms.transition) log(now, *ms.transition);
  last_diag_ = ms.diagnostics;

  const ThrusterPair thr = mix_thrust(ms.throttle, ms.steering);
  vessel_ = step(vessel_, thr, scenario_.vessel, scenario_.environment, disturbance_, dt);
  ++ticks_;
  // Derive time from the tick count so it does not accumulate rounding.
  vessel_.t_s = static_cast<double>(ticks_) * dt;
  const double t1 = vessel_.t_s;

  // Ground station: scripted events, heartbeats, then anything queued by gcs_send.
  const auto& events = scenario_.events;
  while (next_event_ < events.size() && events[next_event_].t_s <= t1 + kTimeEps) {
    const ScenarioEvent& ev = events[next_event_++];
    switch (ev.kind) {
      case ScenarioEvent::Kind::SetMode:
        gcs_send(SetMode{0, ev.mode});
        break;
      case ScenarioEvent::Kind::Manual:
        gcs_send(CommandManual{0, ev.manual.throttle, ev.manual.steering});
        break;
      case ScenarioEvent::Kind::HeartbeatOff:
        heartbeat_on_ = false;
        break;
      case ScenarioEvent::Kind::HeartbeatOn:
        heartbeat_on_ = true;
        next_heartbeat_s_ = t1;
        break;
    }
  }
  if (scripted_heartbeat_ && heartbeat_on_ && t1 + kTimeEps >= next_heartbeat_s_) {
    gcs_send(Heartbeat{0, t1, kProtocolVersion});
    next_heartbeat_s_ += link.heartbeat_period_s;
    if (next_heartbeat_s_ <= t1) next_heartbeat_s_ = t1 + link.heartbeat_period_s;
  }
  for (auto& msg : gcs_outbox_) {
    uplink_.send(std::move(msg), link.gcs_pos, vessel_.position(), t1);
  }
  gcs_outbox_.clear();
  for (const auto& msg : uplink_.poll(t1)) handle_uplink(msg, t1);

  if (t1 + kTimeEps >= next_report_s_) {
    StateReport rep;
    rep.t_s = t1;
    rep.x_m = vessel_.x_m;
    rep.y_m = vessel_.y_m;
    rep.heading_rad = vessel_.heading_rad;
    rep.surge_mps = vessel_.surge_mps;
    rep.yaw_rate_radps = vessel_.yaw_rate_radps;
    rep.mode = guidance_.mode;
    rep.xte_m = last_diag_.xte_m;
    rep.in_frame = last_diag_.in_frame;
    send_down(rep, t1);
    next_report_s_ += link.report_period_s;
    if (next_report_s_ <= t1) next_report_s_ = t1 + link.report_period_s;
  }
  for (auto& msg : downlink_.poll(t1)) gcs_inbox_.push_back(std::move(msg));

  TraceRecord row;
  row.t_s = t1;
  row.x_m = vessel_.x_m;
  row.y_m = vessel_.y_m;
  row.heading_rad = vessel_.heading_rad;
  row.surge_mps = vessel_.surge_mps;
  row.yaw_rate_radps = vessel_.yaw_rate_radps;
  row.left = thr.left;
  row.right = thr.right;
  row.throttle = ms.throttle;
  row.steering = ms.steering;
  row.mode = guidance_.mode;
  row.desired_heading_rad = last_diag_.desired_heading_rad;
  row.desired_speed_mps = last_diag_.desired_speed_mps;
  row.rate_target_radps = last_diag_.rate_target_radps;
  row.heading_err_rad = last_diag_.heading_err_rad;
  row.xte_m = last_diag_.xte_m;
  row.xte_valid = last_diag_.xte_valid;
  row.wp_index = guidance_.mission.current_index;
  if (scenario_.target.present()) {
    const Vec2 truth = scenario_.target.position_at(t1);
    row.target_valid = true;
    row.target_x_m = truth.x;
    row.target_y_m = truth.y;
    if (distance(truth, vessel_.position()) > 0.0) {
      row.in_frame = in_frame(vessel_.heading_rad, vessel_.position(), truth,
                              scenario_.guidance.follow.fov_rad);
    }
  }
  row.failsafe = failsafe_;
  row.uplink = uplink_.stats();
  row.downlink = downlink_.stats();
  return row;
}

}  // namespace skimmer
