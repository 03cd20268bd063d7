// Acceptance suite: one PASS/FAIL line per primary criterion, exit status 1
// if any fails. Each check uses its own oracle rather than the unit tests'.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "skimmer/config.hpp"
#include "skimmer/depth_io.hpp"
#include "skimmer/depth_metrics.hpp"
#include "skimmer/harness.hpp"
#include "skimmer/link.hpp"
#include "skimmer/scenario.hpp"
#include "skimmer/simulation.hpp"
#include "skimmer/steering_control.hpp"
#include "skimmer/telemetry.hpp"
#include "skimmer/trace.hpp"

namespace {

using namespace skimmer;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome check(bool ok, std::string detail) { return {ok, std::move(detail)}; }

// Controller constants --------------------------------------------------------

Outcome controller_constants() {
  for (const auto& name : builtin_scenario_names()) {
    const Scenario sc = builtin_scenario(name);
    const Scenario back = parse_scenario(format_scenario(sc), name, embedded_resolver());
    const SteeringConfig& st = back.guidance.steering;
    const bool ok = st.ang_p == 1.0 && st.rat_gains.ki == 0.2 && st.rat_gains.kd == 0.02 &&
                    std::abs(rad_to_deg(st.rat_max_radps) - 30.0) < 1e-12 &&
                    std::abs(rad_to_deg(st.acc_max_radps2) - 120.0) < 1e-12 &&
                    back.guidance.steering == sc.guidance.steering;
    if (!ok) return check(false, name + ": steering constants differ after round trip");
  }
  return check(true, "ang_p 1.0, rat_i 0.2, rat_d 0.02, rat_max 30 deg/s, acc_max 120 deg/s^2");
}

// PID oracle -------------------------------------------------------------------

Outcome pid_oracle() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const PidGains g{0.5 + u(rng), 0.5 + u(rng), 0.1 + 0.05 * u(rng)};
    const double dt = 0.02;
    const double lim = 0.3;
    PidState state;
    // Oracle: running sum of clamped increments and a stored previous error.
    double sum = 0.0;
    double prev = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const double e = u(rng);
      sum = std::min(lim, std::max(-lim, sum + e * dt));
      const double deriv = k == 0 ? 0.0 : (e - prev) / dt;
      const double expected = g.kp * e + g.ki * sum + g.kd * deriv;
      prev = e;
      const PidResult r = pid_step(g, state, e, dt, lim);
      state = r.state;
      worst = std::max(worst, std::abs(r.output - expected));
    }
  }
  return check(worst <= 1e-9, fmt("max |diff| %.3g over 10 x 1000 steps", worst));
}

// Limit enforcement --------------------------------------------------------------

Outcome limit_enforcement() {
  const double rat_max = deg_to_rad(30.0);
  double worst_rate = 0.0;
  for (const auto& name : builtin_scenario_names()) {
    const Scenario sc = builtin_scenario(name);
    const double step_max = sc.guidance.steering.acc_max_radps2 * sc.dt_s;
    const ScenarioResult r = run_scenario(sc);
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      const double rate = r.trace[i].rate_target_radps;
      worst_rate = std::max(worst_rate, std::abs(rate));
      if (std::abs(rate) > rat_max + 1e-9) {
        return check(false, name + fmt(": |rate| %.9f deg/s", rad_to_deg(std::abs(rate))));
      }
      if (i > 0) {
        const double step = std::abs(rate - r.trace[i - 1].rate_target_radps);
        if (step > step_max + 1e-9) {
          return check(false, name + fmt(": rate step %.9f rad/s", step));
        }
      }
    }
  }
  return check(true, fmt("max |rate| %.6f deg/s over all bundled scenarios", rad_to_deg(worst_rate)));
}

// Thrust mixing ------------------------------------------------------------------

Outcome thrust_mixing() {
  const ThrusterPair p = mix_thrust(0.5, -0.4);
  if (!(p.right > p.left)) return check(false, "mix_thrust(0.5, -0.4) did not favour the right");

  const Scenario sc = parse_scenario(
      "include = common.cfg\n[scenario]\nname = mix\nduration_s = 5\n"
      "[events]\nat = 0 mode manual\nat = 0 manual 0.5 -0.4\n",
      "mix.cfg", embedded_resolver());
  const ScenarioResult r = run_scenario(sc);
  double turned = 0.0;
  double prev = r.trace.front().heading_rad;
  bool thrust_ok = false;
  for (const auto& row : r.trace) {
    const double d = wrap_angle(row.heading_rad - prev);
    if (d > 1e-12) return check(false, fmt("heading rose at t=%.2f", row.t_s));
    turned += d;
    prev = row.heading_rad;
    if (row.steering < 0.0) thrust_ok = row.right > row.left;
  }
  const bool ok = thrust_ok && turned < -0.1 && r.trace.back().mode == Mode::Manual;
  return check(ok, fmt("steering -0.4: right > left, heading change %.1f deg in 5 s", rad_to_deg(turned)));
}

// Closed-loop scenarios ------------------------------------------------------------

Outcome waypoint_mission() {
  const Scenario sc = builtin_scenario("waypoint_square");
  const MetricsReport m = run_scenario(sc).metrics;
  const bool ok = sc.mission.size() == 4 && m.waypoints_reached >= 4 && m.mission_time_s &&
                  *m.mission_time_s <= 120.0 && m.xte_samples > 0 && m.xte_rms_m < 2.0;
  std::ostringstream d;
  d << m.waypoints_reached << "/4 waypoints, time "
    << (m.mission_time_s ? fmt("%.2f s", *m.mission_time_s) : std::string("none")) << " (<= 120), xte rms "
    << fmt("%.3f m (< 2.0)", m.xte_rms_m);
  return check(ok, d.str());
}

Outcome follow_tasks() {
  const Scenario approach = builtin_scenario("follow_approach");
  MetricsSpec spec = metrics_spec_for(approach);
  spec.standoff_m = 10.0;
  spec.standoff_tol_m = 2.0;
  const ScenarioResult ra = run_scenario(approach);
  std::vector<TraceRecord> rows;
  for (const auto& row : ra.trace) rows.push_back(quantize(row));
  const MetricsReport ma = compute_metrics(rows, spec);
  const MetricsReport mr = run_scenario(builtin_scenario("follow_recede")).metrics;
  const bool ok = approach.guidance.follow.standoff_m == 10.0 && ma.settle_time_s &&
                  ma.standoff_hold_s >= 20.0 && ma.acquired && ma.pct_in_frame >= 90.0 &&
                  mr.acquired && mr.pct_in_frame >= 90.0;
  std::ostringstream d;
  d << "approach hold " << fmt("%.2f s", ma.standoff_hold_s) << " within 10 +- 2 m (>= 20), in frame "
    << fmt("%.1f%%", ma.pct_in_frame) << "; recede in frame " << fmt("%.1f%%", mr.pct_in_frame)
    << " (>= 90)";
  return check(ok, d.str());
}

Outcome failsafe() {
  const Scenario sc = parse_scenario(
      "include = common.cfg\n[scenario]\nname = failsafe\nduration_s = 30\n"
      "[events]\nat = 1 mode manual\nat = 2 manual 0.4 0.1\nat = 10 heartbeat off\n"
      "at = 15 mode manual\nat = 20 heartbeat on\nat = 23 mode manual\n",
      "failsafe.cfg", embedded_resolver());
  Simulation sim(sc);
  const double timeout = sc.link.failsafe_timeout_s;
  double tripped_at = -1.0;
  double max_gap = 0.0;
  TraceRecord row;
  while (!sim.finished()) {
    const double now = static_cast<double>(sim.ticks_done()) * sc.dt_s;
    const double gap = now - sim.last_heartbeat_s();
    max_gap = std::max(max_gap, gap);
    row = sim.tick();
    // The tick that first sees gap > timeout must already command Hold.
    if (gap > timeout && row.mode != Mode::Hold) {
      return check(false, fmt("gap %.3f s but mode not Hold", gap));
    }
    if (gap > timeout && tripped_at < 0.0) tripped_at = now;
  }
  const auto& refused = sim.refusals();
  const bool refused_during = refused.size() == 1 && refused[0].t_s > 15.0 && refused[0].t_s < 20.0;
  const bool resumed = row.mode == Mode::Manual && !row.failsafe;
  std::ostringstream d;
  d << "Hold on the tick at " << fmt("%.2f s", tripped_at) << " (gap > 2 s), mode change "
    << (refused_during ? "refused" : "NOT refused") << " while down, "
    << (resumed ? "accepted" : "NOT accepted") << " after resumption";
  return check(tripped_at > 0.0 && max_gap < 12.0 && refused_during && resumed, d.str());
}

// Link ---------------------------------------------------------------------------

Outcome link_range() {
  LinkModel far;
  far.base_loss_prob = 0.0;
  far.seed = 11;
  std::mt19937_64 rng_far(far.seed);
  int delivered_far = 0;
  for (int i = 0; i < 10000; ++i) {
    delivered_far += link_transfer(far, rng_far, {0, 0}, {950, 0}, 0.0).has_value();
  }
  LinkModel near = far;
  near.base_loss_prob = 0.1;
  std::mt19937_64 rng_near(near.seed);
  int delivered_near = 0;
  for (int i = 0; i < 10000; ++i) {
    delivered_near += link_transfer(near, rng_near, {0, 0}, {100, 0}, 0.0).has_value();
  }
  const double rate = delivered_near / 10000.0;
  std::ostringstream d;
  d << "950 m: " << delivered_far << "/10000 delivered; 100 m at 0.1 loss: "
    << fmt("%.2f%%", 100.0 * rate) << " (90 +- 2)";
  return check(delivered_far == 0 && std::abs(rate - 0.9) <= 0.02, d.str());
}

// Protocol -----------------------------------------------------------------------

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  // Values already on the 6-decimal grid the encoder writes.
  static double grid(double v) { return std::round(v * 1e6) / 1e6; }
  double real(double span) { return grid(std::uniform_real_distribution<double>(-span, span)(rng_)); }
  double unit() { return real(1.0); }
  std::uint64_t seq() { return rng_() % 1000000000; }
  bool flip() { return rng_() & 1; }
  Mode mode() { return static_cast<Mode>(rng_() % 4); }
  std::string text() {
    static const char* pieces[] = {"a", "Z", " ", "\"", "\\", "/", "\n", "\t", "é", "ok", "\x01"};
    std::string s;
    const int n = static_cast<int>(rng_() % 6);
    for (int i = 0; i < n; ++i) s += pieces[rng_() % std::size(pieces)];
    return s;
  }

  TelemetryMessage message() {
    switch (rng_() % 8) {
      case 0:
        return Heartbeat{seq(), std::abs(real(1e4)), kProtocolVersion};
      case 1:
        return StateReport{seq(),  std::abs(real(1e4)), real(1e3), real(1e3), real(3.0), real(5.0),
                           real(1.0), mode(),           std::abs(real(100.0)), real(50.0), flip()};
      case 2:
        return CommandManual{seq(), unit(), unit()};
      case 3:
        return SetMode{seq(), mode()};
      case 4: {
        MissionUpload up{seq(), {}};
        const int n = static_cast<int>(rng_() % 5);
        for (int i = 0; i < n; ++i) {
          up.waypoints.push_back({real(500.0), real(500.0), std::abs(real(3.0)),
                                  grid(0.5 + std::abs(real(10.0)))});
        }
        return up;
      }
      case 5:
        return MissionAck{seq(), rng_() % 50, flip(), text()};
      case 6:
        return TargetReport{seq(), real(1e3), real(1e3), real(3.0), real(3.0), std::abs(real(1e4))};
      default:
        return Authority{seq(), flip()};
    }
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

Outcome protocol_robustness() {
  Gen gen(2024);
  int mismatches = 0;
  std::vector<std::string> lines;
  for (int i = 0; i < 10000; ++i) {
    const TelemetryMessage m = gen.message();
    const std::string line = encode(m);
    const DecodeResult d = decode(line);
    if (!d || !(d.message() == m)) ++mismatches;
    lines.push_back(line);
  }
  int rejected = 0;
  int accepted = 0;
  auto& rng = gen.rng();
  for (int i = 0; i < 10000; ++i) {
    std::string line = lines[i];
    const int edits = 1 + static_cast<int>(rng() % 4);
    for (int e = 0; e < edits && !line.empty(); ++e) {
      const std::size_t pos = rng() % line.size();
      switch (rng() % 3) {
        case 0: line[pos] = static_cast<char>(rng() % 256); break;
        case 1: line.erase(pos, 1); break;
        default: line.insert(pos, 1, static_cast<char>(rng() % 256)); break;
      }
    }
    // Any classification is acceptable; an exception or crash is not.
    const DecodeResult d = decode(line);
    (d ? accepted : rejected)++;
  }
  std::ostringstream out;
  out << (10000 - mismatches) << "/10000 round trips exact; 10000 mutated lines classified ("
      << rejected << " rejected, " << accepted << " accepted)";
  return check(mismatches == 0 && rejected + accepted == 10000, out.str());
}

// Depth losses -------------------------------------------------------------------

using depth::DepthMap;
using depth::FeatureSet;
using depth::RegionMask;

DepthMap random_map(std::mt19937_64& rng, std::size_t w, std::size_t h, double lo = 0.0, double hi = 5.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(w * h);
  for (double& x : v) x = u(rng);
  return DepthMap(w, h, std::move(v));
}

double oracle_mae(const DepthMap& a, const DepthMap& b) {
  double s = 0.0;
  for (std::size_t y = 0; y < a.height(); ++y) {
    for (std::size_t x = 0; x < a.width(); ++x) s += std::abs(a.at(x, y) - b.at(x, y));
  }
  return s / static_cast<double>(a.width() * a.height());
}

double oracle_cutmix(const DepthMap& p, const DepthMap& a, const DepthMap& b, const RegionMask& m) {
  double s = 0.0;
  for (std::size_t y = 0; y < p.height(); ++y) {
    for (std::size_t x = 0; x < p.width(); ++x) {
      s += std::abs(p.at(x, y) - (m.at(x, y) ? a.at(x, y) : b.at(x, y)));
    }
  }
  return s / static_cast<double>(p.width() * p.height());
}

double oracle_align(const std::vector<std::vector<double>>& f, const std::vector<std::vector<double>>& g,
                    double alpha) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double dot = 0.0, nf = 0.0, ng = 0.0;
    for (std::size_t k = 0; k < f[i].size(); ++k) {
      dot += f[i][k] * g[i][k];
      nf += f[i][k] * f[i][k];
      ng += g[i][k] * g[i][k];
    }
    s += std::max(0.0, alpha - dot / (std::sqrt(nf) * std::sqrt(ng)));
  }
  return s / static_cast<double>(f.size());
}

Outcome depth_losses() {
  std::mt19937_64 rng(77);
  auto dim = [&](std::size_t max) { return 1 + rng() % max; };
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t w = dim(8), h = dim(8);
    const DepthMap pred = random_map(rng, w, h), gt = random_map(rng, w, h);
    const DepthMap pa = random_map(rng, w, h), pb = random_map(rng, w, h);
    const RegionMask mask = RegionMask::box(w, h, rng() % w, rng() % h, dim(w), dim(h));

    const std::size_t n = dim(16), k = dim(8);
    std::vector<std::vector<double>> f(n, std::vector<double>(k)), g(n, std::vector<double>(k));
    std::vector<double> fd, gd;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        f[i][j] = u(rng);
        g[i][j] = u(rng);
      }
      f[i][0] += 2.0;  // keep norms away from zero
      g[i][0] += 2.0;
      fd.insert(fd.end(), f[i].begin(), f[i].end());
      gd.insert(gd.end(), g[i].begin(), g[i].end());
    }
    const double alpha = u(rng);
    const double lambda = std::abs(u(rng));

    const double ol = oracle_mae(pred, gt);
    const double op = oracle_mae(pred, pa);
    const double oc = oracle_cutmix(pred, pa, pb, mask);
    const double oa = oracle_align(f, g, alpha);
    const double ot = ol + (op + oc) + lambda * oa;

    const double l = depth::labeled_loss(pred, gt);
    const double p = depth::pseudo_loss(pred, pa);
    const double c = depth::cutmix_loss(pred, pa, pb, mask);
    const double a = depth::align_loss(FeatureSet(n, k, fd), FeatureSet(n, k, gd), alpha);
    const double t = depth::total_loss(l, depth::unlabeled_loss(p, c), a, {lambda, alpha});
    for (double diff : {l - ol, p - op, c - oc, a - oa, t - ot}) worst = std::max(worst, std::abs(diff));
  }
  const double worked =
      depth::labeled_loss(DepthMap(2, 2, {1, 2, 3, 4}), DepthMap(2, 2, {1, 1, 3, 3}));
  return check(worst <= 1e-12 && worked == 0.5,
               fmt("max |diff| %.3g over 100 instances per loss; worked example ", worst) +
                   fmt("%.6f (0.5)", worked));
}

// Affine post-processing ---------------------------------------------------------

Outcome affine_post() {
  std::mt19937_64 rng(5);
  const DepthMap base = random_map(rng, 8, 8, 0.0, 1.0);
  std::vector<double> ref;
  for (double v : base.values()) ref.push_back(2.0 * v + 3.0);
  const DepthMap ref_map(8, 8, ref);
  const depth::AffineFit fit = depth::fit_affine(base, ref_map);
  const double residual = std::max(std::abs(fit.scale - 2.0), std::abs(fit.shift - 3.0));

  // Random instances: a prediction in arbitrary units against a reference that
  // is an affine image of it plus measurement noise, sizes up to 8x8.
  int violations = 0;
  std::normal_distribution<double> noise(0.0, 0.05);
  std::uniform_real_distribution<double> su(0.5, 4.0), sh(0.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t w = 2 + rng() % 7, h = 2 + rng() % 7;
    const DepthMap pred = random_map(rng, w, h, 0.0, 1.0);
    const double s = su(rng), b = sh(rng);
    std::vector<double> r;
    for (double v : pred.values()) r.push_back(std::max(0.0, s * v + b + noise(rng)));
    const DepthMap refm(w, h, r);
    const depth::AffineFit f = depth::fit_affine(pred, refm);
    if (depth::aligned_mae(pred, refm, f) > depth::labeled_loss(pred, refm) + 1e-12) ++violations;
  }
  std::ostringstream d;
  d << fmt("(2, 3) recovered with residual %.3g; ", residual) << "aligned MAE > raw MAE on "
    << violations << "/200 random instances";
  return check(residual <= 1e-9 && violations == 0, d.str());
}

// Colorizer ----------------------------------------------------------------------

Outcome colorizer_goldens() {
  const fs::path data = SKIMMER_TEST_DATA_DIR;
  const DepthMap ramp = depth::read_depth_map(data / "ramp.txt");
  const depth::RgbImage img = depth::colorize(ramp);
  const std::string produced = depth::format_ppm(img);
  const std::string golden = depth::read_file(data / "ramp_golden.ppm");
  const depth::Rgb near = img.pixels.front();
  const depth::Rgb far = img.pixels[img.width - 1];
  const bool warm_near = near.r == 255 && near.g == 0 && near.b == 0;
  const bool cool_far = far.r == 0 && far.g == 0 && far.b == 255;
  std::ostringstream d;
  d << "ramp " << img.width << "x" << img.height << " pixmap "
    << (produced == golden ? "byte-identical" : "DIFFERS") << "; nearest " << int(near.r) << ","
    << int(near.g) << "," << int(near.b) << " farthest " << int(far.r) << "," << int(far.g) << ","
    << int(far.b);
  return check(produced == golden && warm_near && cool_far, d.str());
}

// Determinism --------------------------------------------------------------------

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "skimmer_acceptance";
  fs::create_directories(dir);
  std::size_t rows = 0;
  for (const auto& name : builtin_scenario_names()) {
    Scenario sc = builtin_scenario(name);
    const fs::path a = dir / (name + ".a.jsonl");
    const fs::path b = dir / (name + ".b.jsonl");
    const ScenarioResult ra = run_scenario(sc);
    write_trace_jsonl(a, ra.trace);
    write_trace_jsonl(b, run_scenario(sc).trace);
    if (depth::read_file(a) != depth::read_file(b)) return check(false, name + ": traces differ");
    rows += ra.trace.size();
  }
  fs::remove_all(dir);
  return check(true, std::to_string(builtin_scenario_names().size()) + " scenarios, " +
                         std::to_string(rows) + " rows, byte-identical across runs");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"controller constants", controller_constants},
      {"pid oracle equivalence", pid_oracle},
      {"limit enforcement", limit_enforcement},
      {"thrust mixing semantics", thrust_mixing},
      {"waypoint mission", waypoint_mission},
      {"follow tasks", follow_tasks},
      {"failsafe", failsafe},
      {"link range", link_range},
      {"protocol robustness", protocol_robustness},
      {"depth losses", depth_losses},
      {"affine post-processing", affine_post},
      {"colorizer goldens", colorizer_goldens},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    failed += !o.pass;
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
