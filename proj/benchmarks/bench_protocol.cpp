#include <benchmark/benchmark.h>

#include "skimmer/telemetry.hpp"

namespace {

using namespace skimmer;

StateReport sample() {
  StateReport r;
  r.seq = 1234;
  r.t_s = 42.5;
  r.x_m = 12.345678;
  r.y_m = -98.7654;
  r.heading_rad = 1.2;
  r.surge_mps = 1.9;
  r.yaw_rate_radps = -0.1;
  r.mode = Mode::Auto;
  r.xte_m = 0.4;
  return r;
}

void BM_EncodeStateReport(benchmark::State& state) {
  const TelemetryMessage m = sample();
  for (auto _ : state) benchmark::DoNotOptimize(encode(m));
}
BENCHMARK(BM_EncodeStateReport);

void BM_DecodeStateReport(benchmark::State& state) {
  const std::string line = encode(sample());
  for (auto _ : state) benchmark::DoNotOptimize(decode(line));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * line.size()));
}
BENCHMARK(BM_DecodeStateReport);

void BM_DecodeGarbage(benchmark::State& state) {
  const std::string line = R"({"type":"state_report","seq":1,"t_s":"x")";
  for (auto _ : state) benchmark::DoNotOptimize(decode(line));
}
BENCHMARK(BM_DecodeGarbage);

}  // namespace
