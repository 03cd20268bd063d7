#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "skimmer/scenario.hpp"

namespace skimmer {
namespace {

namespace fs = std::filesystem;

Scenario parse(const std::string& body) {
  return parse_scenario("include = common.cfg\n" + body, "test.cfg", embedded_resolver());
}

TEST(Builtins, ExactlyFourNamedScenarios) {
  const auto names = builtin_scenario_names();
  EXPECT_EQ(names, (std::vector<std::string>{"static_approach", "follow_approach",
                                             "follow_recede", "waypoint_square"}));
  for (const auto& n : names) {
    const auto sc = builtin_scenario(n);
    EXPECT_EQ(sc.name, n);
    EXPECT_NO_THROW(sc.validate());
  }
  EXPECT_THROW(builtin_scenario("loiter"), ConfigError);
}

TEST(Builtins, SteeringConstantsLoadedFromConfig) {
  for (const auto& n : builtin_scenario_names()) {
    const auto& st = builtin_scenario(n).guidance.steering;
    EXPECT_DOUBLE_EQ(st.ang_p, 1.0) << n;
    EXPECT_DOUBLE_EQ(st.rat_gains.ki, 0.2) << n;
    EXPECT_DOUBLE_EQ(st.rat_gains.kd, 0.02) << n;
    EXPECT_NEAR(rad_to_deg(st.rat_max_radps), 30.0, 1e-12) << n;
    EXPECT_NEAR(rad_to_deg(st.acc_max_radps2), 120.0, 1e-12) << n;
    EXPECT_EQ(st, SteeringConfig{}) << n;
  }
}

TEST(Builtins, WaypointSquareShape) {
  const auto sc = builtin_scenario("waypoint_square");
  ASSERT_EQ(sc.mission.size(), 4u);
  EXPECT_EQ(sc.seed, 42u);
  EXPECT_EQ(sc.initial_mode, Mode::Auto);
  EXPECT_EQ(sc.environment.current_mps, (Vec2{0, 0}));
  EXPECT_EQ(sc.environment.yaw_disturbance_std, 0.0);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& a = sc.mission[i];
    const auto& b = sc.mission[(i + 1) % 4];
    EXPECT_DOUBLE_EQ(distance(a.position(), b.position()), 100.0);
  }
  EXPECT_EQ(sc.thresholds.min_waypoints_reached, 4u);
  EXPECT_EQ(sc.thresholds.max_mission_time_s, 120.0);
  EXPECT_EQ(sc.thresholds.max_xte_rms_m, 2.0);
}

TEST(Builtins, FollowScenariosDescribeTheirTargets) {
  const auto approach = builtin_scenario("follow_approach");
  EXPECT_NEAR(distance(approach.initial.position(), approach.target.position_at(0.0)), 80.0, 1e-9);
  EXPECT_NEAR(norm(approach.target.velocity_at(10.0)), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(approach.guidance.follow.standoff_m, 10.0);

  const auto recede = builtin_scenario("follow_recede");
  EXPECT_NEAR(distance(recede.initial.position(), recede.target.position_at(0.0)), 10.0, 1e-9);
  double top = 0.0;
  for (double t = 0.0; t < recede.duration_s; t += 0.5) top = std::max(top, norm(recede.target.velocity_at(t)));
  EXPECT_LE(top, 1.5 + 1e-9);
  EXPECT_GT(top, 1.4);

  const auto stat = builtin_scenario("static_approach");
  EXPECT_EQ(norm(stat.target.velocity_at(5.0)), 0.0);
  EXPECT_DOUBLE_EQ(stat.guidance.follow.standoff_m, 5.0);
}

TEST(RoundTrip, FormatThenParseIsIdentity) {
  for (const auto& n : builtin_scenario_names()) {
    const auto sc = builtin_scenario(n);
    const std::string text = format_scenario(sc);
    const auto back = parse_scenario(text, n + ".formatted", embedded_resolver());
    EXPECT_EQ(back, sc) << text;
    EXPECT_EQ(format_scenario(back), text);
  }
}

TEST(RoundTrip, EventsAndNoiseSurvive) {
  const auto sc = parse(
      "[scenario]\nname = ev\nduration_s = 20\nseed = 3\n"
      "[target]\npoint = 0 10 10\npoint = 5 12 10\nnoise_std_m = 0.5\n"
      "[events]\nat = 2 mode manual\nat = 3 manual 0.5 -0.25\nat = 4 heartbeat off\n"
      "at = 9 heartbeat on\nat = 10 mode hold\n");
  ASSERT_EQ(sc.events.size(), 5u);
  EXPECT_EQ(sc.events[1].kind, ScenarioEvent::Kind::Manual);
  EXPECT_DOUBLE_EQ(sc.events[1].manual.steering, -0.25);
  EXPECT_EQ(sc.events[2].kind, ScenarioEvent::Kind::HeartbeatOff);
  EXPECT_EQ(sc.target.noise_seed, 5u);
  EXPECT_EQ(parse_scenario(format_scenario(sc), "x", embedded_resolver()), sc);
}

TEST(Seeds, MasterSeedDerivesTheRest) {
  auto sc = builtin_scenario("follow_approach");
  apply_seed(sc, 1000);
  EXPECT_EQ(sc.seed, 1000u);
  EXPECT_EQ(sc.environment.seed, 1000u);
  EXPECT_EQ(sc.link.model.seed, 1001u);
  EXPECT_EQ(sc.target.noise_seed, 1002u);
}

TEST(TargetScript, PiecewiseLinearAndClamped) {
  TargetScript ts;
  ts.points = {{0.0, {0, 0}}, {10.0, {10, 0}}, {20.0, {10, 20}}};
  EXPECT_EQ(ts.position_at(-5.0), (Vec2{0, 0}));
  EXPECT_EQ(ts.position_at(5.0), (Vec2{5, 0}));
  EXPECT_EQ(ts.position_at(15.0), (Vec2{10, 10}));
  EXPECT_EQ(ts.position_at(99.0), (Vec2{10, 20}));
  EXPECT_EQ(ts.velocity_at(5.0), (Vec2{1, 0}));
  EXPECT_EQ(ts.velocity_at(15.0), (Vec2{0, 2}));
  EXPECT_EQ(ts.velocity_at(25.0), (Vec2{0, 0}));
}

struct BadCase {
  const char* body;
  const char* needle;
};

TEST(Validation, ErrorsNameTheOffendingLine) {
  const BadCase cases[] = {
      {"[scenario]\nname = x\ndt_s = 0\n", "dt_s"},
      {"[scenario]\nname = x\nduration_s = -1\n", "duration_s"},
      {"[scenario]\nname = x\ninitial_mode = loiter\n", "initial_mode"},
      {"[vessel]\nmass_kg = -3\n", "mass_kg"},
      {"[vessel]\nhull_colour = red\n", "hull_colour"},
      {"[sails]\nmain = 1\n", "sails"},
      {"[mission]\nwp = 0 0 1\n", "wp"},
      {"[mission]\nwp = 0 0 1 0\n", "wp"},
      {"[target]\npoint = 5 0 0\npoint = 1 0 0\n", "point"},
      {"[events]\nat = 1 jump\n", "at"},
      {"[events]\nat = 1 manual 2 0\n", "at"},
      {"[link]\nbase_loss_prob = 2\n", "base_loss_prob"},
      {"[steering]\nrat_max_degps = 0\n", "rat_max_degps"},
      {"[follow]\nfov_deg = 200\n", "fov_deg"},
  };
  for (const auto& c : cases) {
    try {
      parse(std::string("[scenario]\nname = x\nduration_s = 10\n") + c.body);
      ADD_FAILURE() << "accepted: " << c.body;
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      EXPECT_NE(msg.find("test.cfg"), std::string::npos) << msg;
      EXPECT_NE(msg.find(c.needle), std::string::npos) << msg;
    }
  }
}

TEST(Validation, AutoStartNeedsMission) {
  EXPECT_THROW(parse("[scenario]\nname = x\ninitial_mode = auto\n"), ConfigError);
  EXPECT_THROW(parse("[scenario]\nname = x\ninitial_mode = follow\n"), ConfigError);
}

TEST(Files, LoadFromDiskResolvesIncludesNextToFile) {
  const fs::path dir = fs::temp_directory_path() / "skimmer_scenario_files";
  fs::remove_all(dir);
  fs::create_directories(dir / "hulls");
  std::ofstream(dir / "hulls" / "heavy.cfg") << "[vessel]\nmass_kg = 12\n";
  std::ofstream(dir / "run.cfg") << "include = common.cfg\n[scenario]\nname = disk\nduration_s = 5\n"
                                    "[vessel]\ninclude = hulls/heavy.cfg\n";
  const auto sc = load_scenario((dir / "run.cfg").string());
  EXPECT_EQ(sc.name, "disk");
  EXPECT_DOUBLE_EQ(sc.vessel.mass_kg, 12.0);
  EXPECT_EQ(load_scenario("waypoint_square"), builtin_scenario("waypoint_square"));
  EXPECT_THROW(load_scenario((dir / "missing.cfg").string()), ConfigError);
  fs::remove_all(dir);
}

TEST(Files, BundledTextIsWhatShips) {
  const auto text = builtin_scenario_text("waypoint_square");
  EXPECT_NE(text.find("include = common.cfg"), std::string::npos);
  EXPECT_EQ(parse_scenario(text, "scenarios/waypoint_square.cfg", embedded_resolver()),
            builtin_scenario("waypoint_square"));
}

}  // namespace
}  // namespace skimmer
