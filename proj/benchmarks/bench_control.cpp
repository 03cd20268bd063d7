#include <benchmark/benchmark.h>

#include "skimmer/guidance.hpp"
#include "skimmer/steering_control.hpp"
#include "skimmer/vessel_dynamics.hpp"

namespace {

using namespace skimmer;

void BM_DynamicsStep(benchmark::State& state) {
  const VesselParams params;
  EnvironmentModel env;
  env.yaw_disturbance_std = 0.05;
  DisturbanceSource dist(env);
  VesselState s;
  const ThrusterPair thr = mix_thrust(0.6, 0.1);
  for (auto _ : state) {
    s = step(s, thr, params, env, dist, 0.02);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_DynamicsStep);

void BM_PidStep(benchmark::State& state) {
  const PidGains g{0.2, 0.2, 0.02};
  PidState st;
  double e = 0.1;
  for (auto _ : state) {
    const auto r = saturating_pid_step(g, st, e, 0.02, 0.3, -1.0, 1.0);
    st = r.state;
    e = -e * 0.999;
    benchmark::DoNotOptimize(r.output);
  }
}
BENCHMARK(BM_PidStep);

void BM_ModeStepAuto(benchmark::State& state) {
  const GuidanceConfig cfg;
  GuidanceState gs = load_mission({}, {{0, 100, 2, 5}, {100, 100, 2, 5}}, {0, 0});
  gs = request_mode(gs, Mode::Auto, VesselState{}, false, std::nullopt, cfg).next;
  VesselState v;
  v.x_m = 3.0;
  v.y_m = 20.0;
  v.surge_mps = 1.5;
  for (auto _ : state) {
    const auto r = mode_step(gs, ModeInputs{v, {}, std::nullopt, false}, cfg, 0.02);
    benchmark::DoNotOptimize(r.steering);
  }
}
BENCHMARK(BM_ModeStepAuto);

}  // namespace
