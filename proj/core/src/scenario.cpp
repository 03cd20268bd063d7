#include "skimmer/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "skimmer/detail/embedded_assets.hpp"

namespace skimmer {

namespace {

const std::vector<std::string>& names() {
  static const std::vector<std::string> list{"static_approach", "follow_approach", "follow_recede",
                                             "waypoint_square"};
  return list;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  return {std::istream_iterator<std::string>(in), std::istream_iterator<std::string>()};
}

// Degrees for display. Prefers a short form when it converts back to the
// same radian value, so 30 deg/s is written as "30" rather than 29.999999999999996.
std::string format_degrees(double rad, bool wrap = false) {
  const double deg = rad_to_deg(rad);
  for (int digits : {12, 15}) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, deg);
    double back = deg_to_rad(parse_real(buf, "<format>"));
    if (wrap) back = wrap_angle(back);
    if (back == rad) return buf;
  }
  return format_number(deg);
}

double radians_from(const ConfigSection& s, const std::string& key, double fallback_rad,
                    bool wrap = false) {
  const auto deg = s.optional_real(key);
  if (!deg) return fallback_rad;
  const double rad = deg_to_rad(*deg);
  return wrap ? wrap_angle(rad) : rad;
}

// The assignment a validation message is about: the key it names, or the key
// minus its unit suffix (messages talk about fov, the file says fov_deg).
const ConfigEntry* blamed_entry(const ConfigSection& s, const std::string& message) {
  const ConfigEntry* best = nullptr;
  std::size_t best_len = 0;
  for (const auto& e : s.entries()) {
    std::string stem = e.key;
    for (const char* unit : {"_degps2", "_degps", "_deg"}) {
      const std::string u = unit;
      if (stem.size() > u.size() && stem.ends_with(u)) {
        stem.resize(stem.size() - u.size());
        break;
      }
    }
    const bool named = message.find(e.key) != std::string::npos ||
                       message.find(stem) != std::string::npos;
    // Later assignments win, as they do when values are read.
    if (named && stem.size() >= best_len) {
      best = s.find(e.key);
      best_len = stem.size();
    }
  }
  return best;
}

template <class Fn>
void checked(const ConfigSection& s, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    const ConfigEntry* entry = blamed_entry(s, e.what());
    throw ConfigError((entry ? s.where(*entry) : s.where()) + ": " + e.what());
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

std::string event_text(const ScenarioEvent& ev) {
  std::string out = format_number(ev.t_s) + " ";
  switch (ev.kind) {
    case ScenarioEvent::Kind::SetMode:
      return out + "mode " + std::string(to_string(ev.mode));
    case ScenarioEvent::Kind::Manual:
      return out + "manual " + format_number(ev.manual.throttle) + " " +
             format_number(ev.manual.steering);
    case ScenarioEvent::Kind::HeartbeatOff:
      return out + "heartbeat off";
    case ScenarioEvent::Kind::HeartbeatOn:
      return out + "heartbeat on";
  }
  return out;
}

ScenarioEvent parse_event(const ConfigSection& s, const ConfigEntry& e) {
  const auto tok = split_ws(e.value);
  const std::string where = s.where(e);
  if (tok.size() < 2) throw ConfigError(where + ": expected '<t> <action> ...'");
  ScenarioEvent ev;
  ev.t_s = parse_real(tok[0], where);
  if (ev.t_s < 0.0) throw ConfigError(where + ": event time must be >= 0");
  if (tok[1] == "mode" && tok.size() == 3) {
    const auto mode = mode_from_string(tok[2]);
    if (!mode) throw ConfigError(where + ": unknown mode '" + tok[2] + "'");
    ev.kind = ScenarioEvent::Kind::SetMode;
    ev.mode = *mode;
  } else if (tok[1] == "manual" && tok.size() == 4) {
    ev.kind = ScenarioEvent::Kind::Manual;
    ev.manual.throttle = parse_real(tok[2], where);
    ev.manual.steering = parse_real(tok[3], where);
    if (std::abs(ev.manual.throttle) > 1.0 || std::abs(ev.manual.steering) > 1.0) {
      throw ConfigError(where + ": manual command values must lie in [-1, 1]");
    }
  } else if (tok[1] == "heartbeat" && tok.size() == 3 && (tok[2] == "off" || tok[2] == "on")) {
    ev.kind = tok[2] == "off" ? ScenarioEvent::Kind::HeartbeatOff
                              : ScenarioEvent::Kind::HeartbeatOn;
  } else {
    throw ConfigError(where + ": unrecognized event '" + e.value + "'");
  }
  return ev;
}

std::optional<std::uint64_t> optional_unsigned(const ConfigSection& s, const std::string& key) {
  if (!s.find(key)) return std::nullopt;
  return s.unsigned_integer(key, 0);
}

void put(std::ostringstream& out, const char* key, double value) {
  out << key << " = " << format_number(value) << '\n';
}

template <class T>
void put_opt(std::ostringstream& out, const char* key, const std::optional<T>& value) {
  if (!value) return;
  if constexpr (std::is_same_v<T, double>) {
    put(out, key, *value);
  } else {
    out << key << " = " << *value << '\n';
  }
}

}  // namespace

Vec2 TargetScript::position_at(double t_s) const {
  if (points.empty()) return {};
  if (t_s <= points.front().t_s) return points.front().pos;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (t_s <= points[i].t_s) {
      const auto& a = points[i - 1];
      const auto& b = points[i];
      const double u = (t_s - a.t_s) / (b.t_s - a.t_s);
      return a.pos + (b.pos - a.pos) * u;
    }
  }
  return points.back().pos;
}

Vec2 TargetScript::velocity_at(double t_s) const {
  if (points.size() < 2 || t_s < points.front().t_s || t_s >= points.back().t_s) return {};
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (t_s < points[i].t_s) {
      const auto& a = points[i - 1];
      const auto& b = points[i];
      return (b.pos - a.pos) * (1.0 / (b.t_s - a.t_s));
    }
  }
  return {};
}

void Scenario::validate() const {
  require(!name.empty(), "[scenario] name must not be empty");
  require(std::isfinite(duration_s) && duration_s >= 0.0, "[scenario] duration_s must be >= 0");
  require(std::isfinite(dt_s) && dt_s > 0.0 && dt_s <= kMaxStepS,
          "[scenario] dt_s must be in (0, " + format_number(kMaxStepS) + "]");
  try {
    vessel.validate();
    environment.validate();
    guidance.validate();
    link.model.validate();
    for (const auto& wp : mission) wp.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
  require(link.heartbeat_period_s > 0.0 && link.failsafe_timeout_s > 0.0 &&
              link.report_period_s > 0.0,
          "[link] periods and timeout must be > 0");
  require(std::isfinite(link.gcs_pos.x) && std::isfinite(link.gcs_pos.y),
          "[link] gcs position must be finite");
  require(std::isfinite(initial.x_m) && std::isfinite(initial.y_m) &&
              std::isfinite(initial.heading_rad) && std::isfinite(initial.surge_mps) &&
              std::isfinite(initial.yaw_rate_radps),
          "[initial] values must be finite");
  for (std::size_t i = 1; i < target.points.size(); ++i) {
    require(target.points[i].t_s > target.points[i - 1].t_s,
            "[target] point times must be strictly increasing");
  }
  require(target.noise_std_m >= 0.0, "[target] noise_std_m must be >= 0");
  for (const auto& ev : events) {
    require(std::isfinite(ev.t_s) && ev.t_s >= 0.0, "[events] times must be >= 0");
  }
}

void apply_seed(Scenario& scenario, std::uint64_t seed) {
  scenario.seed = seed;
  scenario.environment.seed = seed;
  scenario.link.model.seed = seed + 1;
  scenario.target.noise_seed = seed + 2;
}

Scenario scenario_from_config(const ConfigFile& cfg) {
  static const std::vector<std::string> known{"scenario", "vessel",  "environment", "steering",
                                              "speed",    "guidance", "follow",     "link",
                                              "initial",  "mission", "target",      "events",
                                              "thresholds"};
  for (const auto& s : cfg.sections()) {
    if (std::find(known.begin(), known.end(), s.name()) == known.end()) {
      throw ConfigError(s.where() + ": unknown section");
    }
  }
  const ConfigSection* head = cfg.section("scenario");
  if (!head) throw ConfigError(cfg.origin + ": missing [scenario] section");

  Scenario sc;
  head->reject_unknown({"name", "duration_s", "dt_s", "seed", "initial_mode"});
  sc.name = head->text("name", "");
  if (sc.name.empty()) throw ConfigError(head->where() + ": missing required key 'name'");
  sc.duration_s = head->real("duration_s");
  sc.dt_s = head->real("dt_s", sc.dt_s);
  sc.seed = head->unsigned_integer("seed", sc.seed);
  if (const ConfigEntry* e = head->find("initial_mode")) {
    const auto mode = mode_from_string(e->value);
    if (!mode) throw ConfigError(head->where(*e) + ": unknown mode '" + e->value + "'");
    sc.initial_mode = *mode;
  }
  if (sc.duration_s < 0.0) throw ConfigError(head->where() + " duration_s: must be >= 0");
  if (sc.dt_s <= 0.0 || sc.dt_s > kMaxStepS) {
    throw ConfigError(head->where() + " dt_s: must be in (0, " + format_number(kMaxStepS) + "]");
  }
  apply_seed(sc, sc.seed);

  if (const auto* s = cfg.section("vessel")) {
    s->reject_unknown({"mass_kg", "yaw_inertia_kgm2", "max_thrust_n", "thruster_offset_m",
                       "drag_lin_surge", "drag_quad_surge", "drag_lin_yaw", "drag_quad_yaw"});
    auto& v = sc.vessel;
    v.mass_kg = s->real("mass_kg", v.mass_kg);
    v.yaw_inertia_kgm2 = s->real("yaw_inertia_kgm2", v.yaw_inertia_kgm2);
    v.max_thrust_n = s->real("max_thrust_n", v.max_thrust_n);
    v.thruster_offset_m = s->real("thruster_offset_m", v.thruster_offset_m);
    v.drag_lin_surge = s->real("drag_lin_surge", v.drag_lin_surge);
    v.drag_quad_surge = s->real("drag_quad_surge", v.drag_quad_surge);
    v.drag_lin_yaw = s->real("drag_lin_yaw", v.drag_lin_yaw);
    v.drag_quad_yaw = s->real("drag_quad_yaw", v.drag_quad_yaw);
    checked(*s, [&] { v.validate(); });
  }

  if (const auto* s = cfg.section("environment")) {
    s->reject_unknown({"current_east_mps", "current_north_mps", "yaw_disturbance_std",
                       "surge_disturbance_std", "seed"});
    auto& env = sc.environment;
    env.current_mps.x = s->real("current_east_mps", 0.0);
    env.current_mps.y = s->real("current_north_mps", 0.0);
    env.yaw_disturbance_std = s->real("yaw_disturbance_std", 0.0);
    env.surge_disturbance_std = s->real("surge_disturbance_std", 0.0);
    env.seed = s->unsigned_integer("seed", env.seed);
    checked(*s, [&] { env.validate(); });
  }

  if (const auto* s = cfg.section("steering")) {
    s->reject_unknown({"ang_p", "rat_p", "rat_i", "rat_d", "rat_max_degps", "acc_max_degps2",
                       "integ_limit"});
    auto& st = sc.guidance.steering;
    st.ang_p = s->real("ang_p", st.ang_p);
    st.rat_gains.kp = s->real("rat_p", st.rat_gains.kp);
    st.rat_gains.ki = s->real("rat_i", st.rat_gains.ki);
    st.rat_gains.kd = s->real("rat_d", st.rat_gains.kd);
    st.rat_max_radps = radians_from(*s, "rat_max_degps", st.rat_max_radps);
    st.acc_max_radps2 = radians_from(*s, "acc_max_degps2", st.acc_max_radps2);
    st.integ_limit = s->real("integ_limit", st.integ_limit);
    checked(*s, [&] { st.validate(); });
  }

  if (const auto* s = cfg.section("speed")) {
    s->reject_unknown({"kp", "ki", "kd", "integ_limit"});
    auto& sp = sc.guidance.speed;
    sp.gains.kp = s->real("kp", sp.gains.kp);
    sp.gains.ki = s->real("ki", sp.gains.ki);
    sp.gains.kd = s->real("kd", sp.gains.kd);
    sp.integ_limit = s->real("integ_limit", sp.integ_limit);
    checked(*s, [&] { sp.validate(); });
  }

  if (const auto* s = cfg.section("guidance")) {
    s->reject_unknown({"lookahead_m", "track_timeout_s"});
    sc.guidance.lookahead_m = s->real("lookahead_m", sc.guidance.lookahead_m);
    sc.guidance.track_timeout_s = s->real("track_timeout_s", sc.guidance.track_timeout_s);
  }

  if (const auto* s = cfg.section("follow")) {
    s->reject_unknown({"standoff_m", "approach_gain", "max_speed_mps", "fov_deg"});
    auto& f = sc.guidance.follow;
    f.standoff_m = s->real("standoff_m", f.standoff_m);
    f.approach_gain = s->real("approach_gain", f.approach_gain);
    f.max_speed_mps = s->real("max_speed_mps", f.max_speed_mps);
    f.fov_rad = radians_from(*s, "fov_deg", f.fov_rad);
    checked(*s, [&] { f.validate(); });
  }
  if (const auto* s = cfg.section("guidance")) {
    checked(*s, [&] { sc.guidance.validate(); });
  }

  if (const auto* s = cfg.section("link")) {
    s->reject_unknown({"max_range_m", "base_loss_prob", "latency_s", "seed", "gcs_x_m", "gcs_y_m",
                       "heartbeat_period_s", "failsafe_timeout_s", "report_period_s"});
    auto& l = sc.link;
    l.model.max_range_m = s->real("max_range_m", l.model.max_range_m);
    l.model.base_loss_prob = s->real("base_loss_prob", l.model.base_loss_prob);
    l.model.latency_s = s->real("latency_s", l.model.latency_s);
    l.model.seed = s->unsigned_integer("seed", l.model.seed);
    l.gcs_pos.x = s->real("gcs_x_m", l.gcs_pos.x);
    l.gcs_pos.y = s->real("gcs_y_m", l.gcs_pos.y);
    l.heartbeat_period_s = s->real("heartbeat_period_s", l.heartbeat_period_s);
    l.failsafe_timeout_s = s->real("failsafe_timeout_s", l.failsafe_timeout_s);
    l.report_period_s = s->real("report_period_s", l.report_period_s);
    checked(*s, [&] { l.model.validate(); });
    if (l.heartbeat_period_s <= 0.0 || l.failsafe_timeout_s <= 0.0 || l.report_period_s <= 0.0) {
      throw ConfigError(s->where() + ": periods and timeout must be > 0");
    }
  }

  if (const auto* s = cfg.section("initial")) {
    s->reject_unknown({"x_m", "y_m", "heading_deg", "surge_mps", "yaw_rate_degps"});
    auto& v = sc.initial;
    v.x_m = s->real("x_m", 0.0);
    v.y_m = s->real("y_m", 0.0);
    v.heading_rad = radians_from(*s, "heading_deg", 0.0, true);
    v.surge_mps = s->real("surge_mps", 0.0);
    v.yaw_rate_radps = radians_from(*s, "yaw_rate_degps", 0.0);
  }

  if (const auto* s = cfg.section("mission")) {
    s->reject_unknown({"wp"});
    for (const ConfigEntry* e : s->all("wp")) {
      const auto tok = split_ws(e->value);
      if (tok.size() != 4) {
        throw ConfigError(s->where(*e) + ": expected 'x y speed radius'");
      }
      Waypoint wp{parse_real(tok[0], s->where(*e)), parse_real(tok[1], s->where(*e)),
                  parse_real(tok[2], s->where(*e)), parse_real(tok[3], s->where(*e))};
      try {
        wp.validate();
      } catch (const std::exception& ex) {
        throw ConfigError(s->where(*e) + ": " + ex.what());
      }
      sc.mission.push_back(wp);
    }
  }

  if (const auto* s = cfg.section("target")) {
    s->reject_unknown({"point", "noise_std_m", "noise_seed"});
    auto& tg = sc.target;
    tg.noise_std_m = s->real("noise_std_m", 0.0);
    tg.noise_seed = s->unsigned_integer("noise_seed", tg.noise_seed);
    if (tg.noise_std_m < 0.0) throw ConfigError(s->where() + " noise_std_m: must be >= 0");
    for (const ConfigEntry* e : s->all("point")) {
      const auto tok = split_ws(e->value);
      if (tok.size() != 3) throw ConfigError(s->where(*e) + ": expected 't x y'");
      TargetPoint p{parse_real(tok[0], s->where(*e)),
                    {parse_real(tok[1], s->where(*e)), parse_real(tok[2], s->where(*e))}};
      if (!tg.points.empty() && p.t_s <= tg.points.back().t_s) {
        throw ConfigError(s->where(*e) + ": point times must be strictly increasing");
      }
      tg.points.push_back(p);
    }
  }

  if (const auto* s = cfg.section("events")) {
    s->reject_unknown({"at"});
    for (const ConfigEntry* e : s->all("at")) sc.events.push_back(parse_event(*s, *e));
    std::stable_sort(sc.events.begin(), sc.events.end(),
                     [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.t_s < b.t_s; });
  }

  if (const auto* s = cfg.section("thresholds")) {
    s->reject_unknown({"min_waypoints_reached", "max_mission_time_s", "max_xte_rms_m",
                       "standoff_m", "standoff_tol_m", "min_standoff_hold_s", "min_pct_in_frame",
                       "final_distance_m", "final_distance_tol_m"});
    auto& th = sc.thresholds;
    th.min_waypoints_reached = optional_unsigned(*s, "min_waypoints_reached");
    th.max_mission_time_s = s->optional_real("max_mission_time_s");
    th.max_xte_rms_m = s->optional_real("max_xte_rms_m");
    th.standoff_m = s->optional_real("standoff_m");
    th.standoff_tol_m = s->optional_real("standoff_tol_m");
    th.min_standoff_hold_s = s->optional_real("min_standoff_hold_s");
    th.min_pct_in_frame = s->optional_real("min_pct_in_frame");
    th.final_distance_m = s->optional_real("final_distance_m");
    th.final_distance_tol_m = s->optional_real("final_distance_tol_m");
    for (const auto& e : s->entries()) {
      if (parse_real(e.value, s->where(e)) < 0.0) {
        throw ConfigError(s->where(e) + ": must be >= 0");
      }
    }
    if (th.min_pct_in_frame && *th.min_pct_in_frame > 100.0) {
      throw ConfigError(s->where() + " min_pct_in_frame: must be <= 100");
    }
    if (th.min_standoff_hold_s && !th.standoff_tol_m) {
      throw ConfigError(s->where() + ": min_standoff_hold_s needs standoff_tol_m");
    }
    if (th.final_distance_tol_m && !th.final_distance_m) {
      throw ConfigError(s->where() + ": final_distance_tol_m needs final_distance_m");
    }
  }

  if (sc.initial_mode == Mode::Auto && sc.mission.empty()) {
    throw ConfigError(head->where() + ": initial_mode auto needs a [mission] with waypoints");
  }
  if (sc.initial_mode == Mode::Follow && !sc.target.present()) {
    throw ConfigError(head->where() + ": initial_mode follow needs a [target] script");
  }
  sc.validate();
  return sc;
}

Scenario parse_scenario(const std::string& text, const std::string& origin,
                        const IncludeResolver& resolver) {
  return scenario_from_config(parse_config(text, origin, resolver));
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open scenario file " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_scenario(text, path.string(), filesystem_resolver());
}

std::string format_scenario(const Scenario& sc) {
  std::ostringstream out;
  out << "[scenario]\nname = " << sc.name << '\n';
  put(out, "duration_s", sc.duration_s);
  put(out, "dt_s", sc.dt_s);
  out << "seed = " << sc.seed << '\n';
  out << "initial_mode = " << to_string(sc.initial_mode) << '\n';

  const auto& v = sc.vessel;
  out << "\n[vessel]\n";
  put(out, "mass_kg", v.mass_kg);
  put(out, "yaw_inertia_kgm2", v.yaw_inertia_kgm2);
  put(out, "max_thrust_n", v.max_thrust_n);
  put(out, "thruster_offset_m", v.thruster_offset_m);
  put(out, "drag_lin_surge", v.drag_lin_surge);
  put(out, "drag_quad_surge", v.drag_quad_surge);
  put(out, "drag_lin_yaw", v.drag_lin_yaw);
  put(out, "drag_quad_yaw", v.drag_quad_yaw);

  const auto& env = sc.environment;
  out << "\n[environment]\n";
  put(out, "current_east_mps", env.current_mps.x);
  put(out, "current_north_mps", env.current_mps.y);
  put(out, "yaw_disturbance_std", env.yaw_disturbance_std);
  put(out, "surge_disturbance_std", env.surge_disturbance_std);
  out << "seed = " << env.seed << '\n';

  const auto& st = sc.guidance.steering;
  out << "\n[steering]\n";
  put(out, "ang_p", st.ang_p);
  put(out, "rat_p", st.rat_gains.kp);
  put(out, "rat_i", st.rat_gains.ki);
  put(out, "rat_d", st.rat_gains.kd);
  out << "rat_max_degps = " << format_degrees(st.rat_max_radps) << '\n';
  out << "acc_max_degps2 = " << format_degrees(st.acc_max_radps2) << '\n';
  put(out, "integ_limit", st.integ_limit);

  const auto& sp = sc.guidance.speed;
  out << "\n[speed]\n";
  put(out, "kp", sp.gains.kp);
  put(out, "ki", sp.gains.ki);
  put(out, "kd", sp.gains.kd);
  put(out, "integ_limit", sp.integ_limit);

  out << "\n[guidance]\n";
  put(out, "lookahead_m", sc.guidance.lookahead_m);
  put(out, "track_timeout_s", sc.guidance.track_timeout_s);

  const auto& f = sc.guidance.follow;
  out << "\n[follow]\n";
  put(out, "standoff_m", f.standoff_m);
  put(out, "approach_gain", f.approach_gain);
  put(out, "max_speed_mps", f.max_speed_mps);
  out << "fov_deg = " << format_degrees(f.fov_rad) << '\n';

  const auto& l = sc.link;
  out << "\n[link]\n";
  put(out, "max_range_m", l.model.max_range_m);
  put(out, "base_loss_prob", l.model.base_loss_prob);
  put(out, "latency_s", l.model.latency_s);
  out << "seed = " << l.model.seed << '\n';
  put(out, "gcs_x_m", l.gcs_pos.x);
  put(out, "gcs_y_m", l.gcs_pos.y);
  put(out, "heartbeat_period_s", l.heartbeat_period_s);
  put(out, "failsafe_timeout_s", l.failsafe_timeout_s);
  put(out, "report_period_s", l.report_period_s);

  const auto& in = sc.initial;
  out << "\n[initial]\n";
  put(out, "x_m", in.x_m);
  put(out, "y_m", in.y_m);
  out << "heading_deg = " << format_degrees(in.heading_rad, true) << '\n';
  put(out, "surge_mps", in.surge_mps);
  out << "yaw_rate_degps = " << format_degrees(in.yaw_rate_radps) << '\n';

  if (!sc.mission.empty()) {
    out << "\n[mission]\n";
    for (const auto& wp : sc.mission) {
      out << "wp = " << format_number(wp.x_m) << ' ' << format_number(wp.y_m) << ' '
          << format_number(wp.speed_mps) << ' ' << format_number(wp.accept_radius_m) << '\n';
    }
  }

  out << "\n[target]\n";
  put(out, "noise_std_m", sc.target.noise_std_m);
  out << "noise_seed = " << sc.target.noise_seed << '\n';
  for (const auto& p : sc.target.points) {
    out << "point = " << format_number(p.t_s) << ' ' << format_number(p.pos.x) << ' '
        << format_number(p.pos.y) << '\n';
  }

  if (!sc.events.empty()) {
    out << "\n[events]\n";
    for (const auto& ev : sc.events) out << "at = " << event_text(ev) << '\n';
  }

  const auto& th = sc.thresholds;
  if (th != Thresholds{}) {
    out << "\n[thresholds]\n";
    put_opt(out, "min_waypoints_reached", th.min_waypoints_reached);
    put_opt(out, "max_mission_time_s", th.max_mission_time_s);
    put_opt(out, "max_xte_rms_m", th.max_xte_rms_m);
    put_opt(out, "standoff_m", th.standoff_m);
    put_opt(out, "standoff_tol_m", th.standoff_tol_m);
    put_opt(out, "min_standoff_hold_s", th.min_standoff_hold_s);
    put_opt(out, "min_pct_in_frame", th.min_pct_in_frame);
    put_opt(out, "final_distance_m", th.final_distance_m);
    put_opt(out, "final_distance_tol_m", th.final_distance_tol_m);
  }
  return out.str();
}

std::vector<std::string> builtin_scenario_names() { return names(); }

std::string builtin_scenario_text(const std::string& name) {
  const auto& list = names();
  if (std::find(list.begin(), list.end(), name) == list.end()) {
    throw ConfigError("unknown bundled scenario '" + name + "'");
  }
  const auto text = detail::find_embedded("scenarios/" + name + ".cfg");
  if (!text) throw ConfigError("bundled scenario '" + name + "' is missing from the build");
  return std::string(*text);
}

Scenario builtin_scenario(const std::string& name) {
  return parse_scenario(builtin_scenario_text(name), "scenarios/" + name + ".cfg",
                        embedded_resolver());
}

Scenario load_scenario(const std::string& ref) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(ref, ec)) return load_scenario_file(ref);
  const auto& list = names();
  if (std::find(list.begin(), list.end(), ref) != list.end()) return builtin_scenario(ref);
  throw ConfigError("no scenario file or bundled scenario named '" + ref + "'");
}

}  // namespace skimmer
