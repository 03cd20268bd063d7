#include <benchmark/benchmark.h>

#include <random>

#include "skimmer/depth_metrics.hpp"

namespace {

using namespace skimmer::depth;

DepthMap noise_map(std::size_t w, std::size_t h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<double> v(w * h);
  for (double& x : v) x = u(rng);
  return DepthMap(w, h, std::move(v));
}

void BM_LabeledLoss(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DepthMap a = noise_map(n, n, 1), b = noise_map(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(labeled_loss(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_LabeledLoss)->Arg(64)->Arg(256);

void BM_CutmixLoss(benchmark::State& state) {
  const DepthMap p = noise_map(256, 256, 1), a = noise_map(256, 256, 2), b = noise_map(256, 256, 3);
  const RegionMask m = RegionMask::box(256, 256, 64, 64, 128, 128);
  for (auto _ : state) benchmark::DoNotOptimize(cutmix_loss(p, a, b, m));
}
BENCHMARK(BM_CutmixLoss);

void BM_PreprocessResample(benchmark::State& state) {
  const DepthMap m = noise_map(640, 480, 4);
  for (auto _ : state) benchmark::DoNotOptimize(preprocess(m, 518, 392));
}
BENCHMARK(BM_PreprocessResample);

void BM_FitAffine(benchmark::State& state) {
  const DepthMap p = noise_map(256, 256, 5), r = noise_map(256, 256, 6);
  for (auto _ : state) benchmark::DoNotOptimize(fit_affine(p, r));
}
BENCHMARK(BM_FitAffine);

void BM_Colorize(benchmark::State& state) {
  const DepthMap m = noise_map(518, 392, 7);
  for (auto _ : state) benchmark::DoNotOptimize(colorize(m));
}
BENCHMARK(BM_Colorize);

}  // namespace
