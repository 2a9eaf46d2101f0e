#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "anisoflow/flow_engine.hpp"
#include "anisoflow/symfunc.hpp"
#include "anisoflow/weingarten.hpp"

namespace af = anisoflow;

namespace {

af::RadialGraph bumpy_sphere(int n_lat) {
  const auto grid = af::SphericalGrid::sphere(n_lat, 2 * n_lat);
  std::vector<double> phi(grid.size());
  for (int i = 0; i < grid.n_rows(); ++i) {
    for (int j = 0; j < grid.n_cols(); ++j) {
      const double x = std::cos(grid.theta(i));
      phi[grid.index(i, j)] = std::log(1.0 + 0.1 * (1.5 * x * x - 0.5) + 0.02 * std::sin(grid.theta(i)) * std::cos(grid.lon(j)));
    }
  }
  return af::RadialGraph(grid, std::move(phi));
}

void BM_Weingarten(benchmark::State& state) {
  const auto g = bumpy_sphere(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(af::weingarten(g));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.grid().size()));
}
BENCHMARK(BM_Weingarten)->Arg(32)->Arg(64);

void BM_Rhs(benchmark::State& state) {
  const auto g = bumpy_sphere(static_cast<int>(state.range(0)));
  const auto p = af::SpeedProfile::make(2, 2, 1.0, 4.0, af::GSpec::exp_flat(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(af::rhs(p, g, 0.1));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.grid().size()));
}
BENCHMARK(BM_Rhs)->Arg(32)->Arg(64);

void BM_Step(benchmark::State& state) {
  const auto p = af::SpeedProfile::make(2, 2, 1.0, 4.0, af::GSpec::exp_flat(1.0));
  const auto s = af::FlowState::initial(p, bumpy_sphere(64));
  for (auto _ : state) benchmark::DoNotOptimize(af::step(s, {}));
}
BENCHMARK(BM_Step);

void BM_SigmaPartials(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  const af::CurvatureVector kappa{u(rng), u(rng)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(af::sigma_k(kappa, 2));
    benchmark::DoNotOptimize(af::sigma_k_partials(kappa, 2));
  }
}
BENCHMARK(BM_SigmaPartials);

}  // namespace
BENCHMARK_MAIN();
