#include <benchmark/benchmark.h>

#include <array>

#include "tiltlab/tiltlab.hpp"

using namespace tiltlab;

static void BM_SnisWeights(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto s = DistributionModel(ScalarModel::beta(2, 5)).sample(n, 1);
  const auto tilt = TiltSpec::scalar(50.0);
  for (auto _ : state) benchmark::DoNotOptimize(snis_weights(s, tilt));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * n));
}
BENCHMARK(BM_SnisWeights)->RangeMultiplier(10)->Range(1000, 1'000'000)->Unit(benchmark::kMicrosecond);

static void BM_Resample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto we = snis_weights(DistributionModel(ScalarModel::uniform01()).sample(n, 2), TiltSpec::scalar(5.0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(resample(we, 10'000, ++seed));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * 10'000));
}
BENCHMARK(BM_Resample)->Arg(1000)->Arg(1'000'000)->Unit(benchmark::kMicrosecond);

static void BM_Ks1d(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto we = snis_weights(DistributionModel(ScalarModel::exponential(1)).sample(n, 3), TiltSpec::scalar(0.3));
  for (auto _ : state)
    benchmark::DoNotOptimize(ks_1d(we, [](double x) { return x <= 0 ? 0.0 : -std::expm1(-0.7 * x); }));
}
BENCHMARK(BM_Ks1d)->RangeMultiplier(10)->Range(1000, 1'000'000)->Unit(benchmark::kMicrosecond);

static void BM_MThetaQuadrature(benchmark::State& state) {
  const DistributionModel b = ScalarModel::beta(2, 5);
  const double theta = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(m_theta_analytic(b, TiltSpec::scalar(theta)));
}
BENCHMARK(BM_MThetaQuadrature)->Arg(1)->Arg(50)->Arg(2000)->Unit(benchmark::kMicrosecond);

static void BM_TiltedCdfBuild(benchmark::State& state) {
  const auto m = ScalarModel::beta(2, 5);
  for (auto _ : state) benchmark::DoNotOptimize(TiltedCdf(m, TiltSpec::scalar(50.0)));
}
BENCHMARK(BM_TiltedCdfBuild)->Unit(benchmark::kMicrosecond);

static void BM_SupGauss(benchmark::State& state) {
  const GaussCovSpec spec{ScalarModel::uniform01(), TiltSpec::scalar(1.0), {}};
  const auto reps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_sup_gauss(spec, reps, 7));
}
BENCHMARK(BM_SupGauss)->Arg(100)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_KsRect2d(benchmark::State& state) {
  const auto prod = DistributionModel::product({ScalarModel::uniform01(), ScalarModel::exponential(1)});
  const auto we = snis_weights(prod.sample(100'000, 4), TiltSpec::identity({1.0, 0.5}));
  const std::array<double, 2> lo{0, 0}, hi{1, 4};
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(ks_rect_hd(we, [&](std::span<const double> x) { return prod.orthant_cdf(x); }, lo, hi, k));
}
BENCHMARK(BM_KsRect2d)->Arg(16)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_Prm(benchmark::State& state) {
  const PRMConfig cfg{1.0, static_cast<double>(state.range(0)), 2.0, 1e-8};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_prm_1d(cfg, ++seed));
}
BENCHMARK(BM_Prm)->Arg(3)->Arg(40);

static void BM_ZcPrm(benchmark::State& state) {
  const PRMConfig cfg{1.0, 40.0, 2.0, 1e-8};
  for (auto _ : state) benchmark::DoNotOptimize(sample_z_cprm(cfg, 3000, 5));
}
BENCHMARK(BM_ZcPrm)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
