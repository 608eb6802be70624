#include <benchmark/benchmark.h>

#include <cmath>

#include "hypdir/empirical.hpp"
#include "hypdir/limits.hpp"

using namespace hypdir;

namespace {

const LatticeModel& modular() {
  static const LatticeModel m = LatticeModel::modular_i();
  return m;
}

void BM_OrbitBallModular(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  std::size_t n = 0;
  for (auto _ : state) {
    auto res = orbit_ball(modular(), t);
    n = res.points.size();
    benchmark::DoNotOptimize(res);
  }
  state.counters["points"] = static_cast<double>(n);
}
BENCHMARK(BM_OrbitBallModular)->Arg(6)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_OrbitBallPicard(benchmark::State& state) {
  const auto model = LatticeModel::picard();
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(orbit_ball(model, t));
}
BENCHMARK(BM_OrbitBallPicard)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_PairCorrelation(benchmark::State& state) {
  const auto ds = directions(modular(), static_cast<double>(state.range(0)));
  std::vector<double> grid;
  for (int k = 1; k <= 16; ++k) grid.push_back(0.25 * k);
  for (auto _ : state) benchmark::DoNotOptimize(pair_corr_empirical(ds, grid));
  state.counters["directions"] = static_cast<double>(ds.size());
}
BENCHMARK(BM_PairCorrelation)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_CountDisc(benchmark::State& state) {
  const auto ds = directions(modular(), 10.0);
  const auto sampler = CountSampler::uniform(0);
  std::uint64_t i = 0;
  for (auto _ : state) {
    double v[2];
    sampler.draw_sphere(i++, v);
    benchmark::DoNotOptimize(count_disc(ds, 1.0, v));
  }
}
BENCHMARK(BM_CountDisc);

void BM_HaarTruncatedCount(benchmark::State& state) {
  const auto model = state.range(0) == 2 ? LatticeModel::modular_i() : LatticeModel::picard();
  const Region a = ball_of_volume(model.dim() - 1, 1.0);
  std::uint64_t i = 0;
  for (auto _ : state) {
    CounterRng rng(0, i++);
    const auto s = haar_sample(model, rng);
    benchmark::DoNotOptimize(count_truncated(model, sl_inverse(s.g), std::numeric_limits<double>::infinity(), 14.0, a));
  }
}
BENCHMARK(BM_HaarTruncatedCount)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

void BM_FGammaPrimeClosedForm(benchmark::State& state) {
  double alpha = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f_gamma_prime(1.3, alpha, 2));
    alpha = alpha < 5 ? alpha * 1.01 : 0.1;
  }
}
BENCHMARK(BM_FGammaPrimeClosedForm);

void BM_FGammaPrimeQuadratureOracle(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(f_gamma_quadrature(1.3, 1.2, 2));
}
BENCHMARK(BM_FGammaPrimeQuadratureOracle)->Unit(benchmark::kMillisecond);

void BM_PairDensityValue(benchmark::State& state) {
  const PairDensity density(modular());
  double xi = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(density(xi));
    xi = xi < 4 ? xi + 0.01 : 0.1;
  }
}
BENCHMARK(BM_PairDensityValue)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
