#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "skimmer/harness.hpp"
#include "skimmer/simulation.hpp"

namespace skimmer {
namespace {

namespace fs = std::filesystem;

Scenario parse(const std::string& body) {
  return parse_scenario("include = common.cfg\n" + body, "sim.cfg", embedded_resolver());
}

std::string jsonl(const std::vector<TraceRecord>& rows) {
  std::ostringstream out;
  write_trace_jsonl(out, rows);
  return out.str();
}

TEST(Simulation, OneRowPerTickStrictlyIncreasing) {
  const auto sc = parse("[scenario]\nname = t\nduration_s = 2\ndt_s = 0.05\n");
  const auto r = run_scenario(sc);
  ASSERT_EQ(r.trace.size(), 40u);
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    EXPECT_GT(r.trace[i].t_s, r.trace[i - 1].t_s);
  }
  EXPECT_DOUBLE_EQ(r.trace.back().t_s, 2.0);
}

TEST(Simulation, ZeroDurationGivesEmptyTrace) {
  const auto sc = parse("[scenario]\nname = z\nduration_s = 0\n");
  const auto r = run_scenario(sc);
  EXPECT_TRUE(r.trace.empty());
  EXPECT_EQ(r.metrics.rows, 0u);
  EXPECT_FALSE(r.metrics.acquired);
  EXPECT_TRUE(r.metrics.all_pass());
}

TEST(Simulation, HoldKeepsStillInCalmWater) {
  const auto sc = parse("[scenario]\nname = h\nduration_s = 5\n");
  const auto r = run_scenario(sc);
  EXPECT_EQ(r.trace.back().mode, Mode::Hold);
  EXPECT_NEAR(r.trace.back().x_m, 0.0, 1e-9);
  EXPECT_NEAR(r.trace.back().y_m, 0.0, 1e-9);
}

TEST(Simulation, ManualEventsDriveThrusters) {
  const auto sc = parse(
      "[scenario]\nname = m\nduration_s = 6\n"
      "[events]\nat = 0.5 mode manual\nat = 1 manual 0.6 -0.3\n");
  const auto r = run_scenario(sc);
  const auto& last = r.trace.back();
  EXPECT_EQ(last.mode, Mode::Manual);
  EXPECT_DOUBLE_EQ(last.throttle, 0.6);
  EXPECT_DOUBLE_EQ(last.steering, -0.3);
  EXPECT_NEAR(last.left, 0.3, 1e-12);
  EXPECT_NEAR(last.right, 0.9, 1e-12);
  EXPECT_LT(last.yaw_rate_radps, 0.0);
  ASSERT_FALSE(r.transitions.empty());
  EXPECT_EQ(r.transitions[0].to, Mode::Manual);
  EXPECT_EQ(r.transitions[0].reason, "operator request");
}

TEST(Simulation, FailsafeWithinOneTickAndResumption) {
  const auto sc = parse(
      "[scenario]\nname = fs\nduration_s = 30\n"
      "[events]\nat = 1 mode manual\nat = 2 manual 0.3 0\nat = 10 heartbeat off\n"
      "at = 15 mode manual\nat = 20 heartbeat on\nat = 23 mode manual\n");
  Simulation sim(sc);
  std::vector<TraceRecord> rows;
  while (!sim.finished()) rows.push_back(sim.tick());

  const auto& tr = sim.transitions();
  ASSERT_GE(tr.size(), 3u);
  EXPECT_EQ(tr[1].to, Mode::Hold);
  EXPECT_EQ(tr[1].reason, "link failsafe");
  const double dt = sc.dt_s;
  // Heartbeats go out each whole second; the 10 s one is suppressed, so the
  // last arrives at 9 s plus latency, rounded up to a tick.
  const double last_hb = 9.0 + sc.link.model.latency_s;
  const double gap_exceeded_at = last_hb + sc.link.failsafe_timeout_s;
  EXPECT_GT(tr[1].t_s, gap_exceeded_at - 1e-9);
  EXPECT_LE(tr[1].t_s, gap_exceeded_at + 2 * dt);
  // The row of that tick already reports Hold.
  for (const auto& row : rows) {
    if (row.t_s > tr[1].t_s + 1e-9 && row.t_s < 20.0) {
      ASSERT_EQ(row.mode, Mode::Hold) << row.t_s;
      ASSERT_TRUE(row.failsafe);
    }
  }
  // Refused while the link is down, accepted after it returns.
  ASSERT_EQ(sim.refusals().size(), 1u);
  EXPECT_EQ(sim.refusals()[0].reason, "failsafe active");
  EXPECT_EQ(tr[2].to, Mode::Manual);
  EXPECT_GT(tr[2].t_s, 23.0);
  EXPECT_EQ(rows.back().mode, Mode::Manual);
  EXPECT_FALSE(rows.back().failsafe);
}

TEST(Simulation, MissionUploadIsAcknowledged) {
  const auto sc = parse("[scenario]\nname = up\nduration_s = 60\n");
  Simulation sim(sc);
  sim.gcs_send(MissionUpload{0, {{0, 20, 1.5, 4}, {20, 20, 1.5, 4}, {20, 0, 1.5, 4}, {0, 0, 1.5, 4}}});
  sim.tick();
  std::vector<TelemetryMessage> got;
  for (int i = 0; i < 20; ++i) {
    sim.tick();
    for (auto& m : sim.gcs_receive()) got.push_back(std::move(m));
  }
  const MissionAck* ack = nullptr;
  for (const auto& m : got) {
    if (const auto* a = std::get_if<MissionAck>(&m)) ack = a;
  }
  ASSERT_NE(ack, nullptr);
  EXPECT_TRUE(ack->ok);
  EXPECT_EQ(ack->count, 4u);
  sim.gcs_send(SetMode{0, Mode::Auto});
  bool saw_auto_report = false;
  for (int i = 0; i < 50; ++i) {
    sim.tick();
    for (const auto& m : sim.gcs_receive()) {
      if (const auto* s = std::get_if<StateReport>(&m)) saw_auto_report |= s->mode == Mode::Auto;
    }
  }
  EXPECT_TRUE(saw_auto_report);
}

TEST(Simulation, BadMissionUploadIsNacked) {
  Simulation sim(parse("[scenario]\nname = up\nduration_s = 5\n"));
  sim.gcs_send(MissionUpload{0, {{0, 20, 1.5, -1}}});
  const MissionAck* ack = nullptr;
  std::vector<TelemetryMessage> got;
  for (int i = 0; i < 20; ++i) {
    sim.tick();
    for (auto& m : sim.gcs_receive()) got.push_back(std::move(m));
  }
  for (const auto& m : got) {
    if (const auto* a = std::get_if<MissionAck>(&m)) ack = a;
  }
  ASSERT_NE(ack, nullptr);
  EXPECT_FALSE(ack->ok);
  EXPECT_FALSE(ack->reason.empty());
}

TEST(Simulation, StateReportsAtTenHertz) {
  Simulation sim(parse("[scenario]\nname = r\nduration_s = 10\n"));
  int reports = 0;
  while (!sim.finished()) {
    sim.tick();
    for (const auto& m : sim.gcs_receive()) reports += std::holds_alternative<StateReport>(m);
  }
  EXPECT_NEAR(reports, 100, 1);
}

TEST(Simulation, OutOfRangeVesselLosesLinkAndHolds) {
  // The ground station sits 1 km away: nothing gets through, failsafe trips.
  const auto sc = parse(
      "[scenario]\nname = far\nduration_s = 5\n[link]\ngcs_x_m = 1000\n"
      "[events]\nat = 0.5 mode manual\n");
  const auto r = run_scenario(sc);
  EXPECT_EQ(r.trace.back().mode, Mode::Hold);
  EXPECT_EQ(r.trace.back().uplink.delivered, 0u);
  EXPECT_GT(r.trace.back().uplink.dropped, 0u);
  EXPECT_TRUE(r.trace.back().failsafe);
}

TEST(Simulation, InitialModeMustBeReachable) {
  auto sc = parse("[scenario]\nname = x\nduration_s = 5\n");
  sc.initial_mode = Mode::Follow;
  EXPECT_THROW(Simulation{sc}, ConfigError);
}

TEST(Harness, DeterministicBytes) {
  for (const auto& name : builtin_scenario_names()) {
    const auto sc = builtin_scenario(name);
    EXPECT_EQ(jsonl(run_scenario(sc).trace), jsonl(run_scenario(sc).trace)) << name;
  }
}

TEST(Harness, SeedChangesNoisyRuns) {
  auto sc = builtin_scenario("follow_approach");
  sc.duration_s = 10;
  sc.environment.yaw_disturbance_std = 0.2;
  auto other = sc;
  apply_seed(other, 999);
  EXPECT_NE(jsonl(run_scenario(sc).trace), jsonl(run_scenario(other).trace));
}

TEST(Harness, MetricsRecomputedFromSavedTraceMatch) {
  const auto sc = builtin_scenario("follow_approach");
  const auto r = run_scenario(sc);
  const fs::path path = fs::temp_directory_path() / "skimmer_follow_approach.jsonl";
  write_trace_jsonl(path, r.trace);
  const auto back = read_trace_file(path);
  EXPECT_EQ(compute_metrics(back, metrics_spec_for(sc)), r.metrics);
  EXPECT_EQ(metrics_line(compute_metrics(back, metrics_spec_for(sc))), metrics_line(r.metrics));
  fs::remove(path);
}

TEST(Harness, CallbackSeesEveryRow) {
  auto sc = builtin_scenario("static_approach");
  sc.duration_s = 3;
  std::size_t seen = 0;
  const auto r = run_scenario(sc, [&](const TraceRecord&) { ++seen; });
  EXPECT_EQ(seen, r.trace.size());
}

}  // namespace
}  // namespace skimmer
