#include <memory>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "hypflow/flow.hpp"

using namespace hypflow;

namespace {

std::shared_ptr<const SphereGrid> grid_for(GridMode mode, int n, int ntheta) {
  const int nphi = mode == GridMode::full2d ? 2 * ntheta : 1;
  return std::make_shared<const SphereGrid>(SphereGrid::build(mode, n, ntheta, nphi));
}

void BM_ElementarySymmetric(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(0.5, 2.0);
  std::vector<double> kappa(n), e(n + 1);
  for (double& k : kappa) k = dist(rng);
  for (auto _ : state) {
    elementary_symmetric_all(kappa, e);
    benchmark::DoNotOptimize(e.data());
  }
}
BENCHMARK(BM_ElementarySymmetric)->DenseRange(2, 8, 2);

void BM_GeometryAxisym(benchmark::State& state) {
  const RadialSurface s =
      make_perturbed_sphere(grid_for(GridMode::axisym, 4, static_cast<int>(state.range(0))), 1.0, 0.05, 2);
  for (auto _ : state) benchmark::DoNotOptimize(geometry(s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GeometryAxisym)->RangeMultiplier(2)->Range(100, 800)->Complexity();

void BM_GeometryFull2d(benchmark::State& state) {
  const RadialSurface s = make_perturbed_sphere(
      grid_for(GridMode::full2d, 2, static_cast<int>(state.range(0))), 1.0, 0.05,
      [](double t, double p) { return std::sin(t) * std::sin(t) * std::cos(2 * p); });
  for (auto _ : state) benchmark::DoNotOptimize(geometry(s));
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_GeometryFull2d)->RangeMultiplier(2)->Range(16, 64)->Complexity();

void BM_MichaelSimonReport(benchmark::State& state) {
  const RadialSurface s = make_perturbed_sphere(grid_for(GridMode::axisym, 4, 200), 1.0, 0.05, 2);
  const GeometryFields geo = geometry(s);
  const WeightProfile f = WeightProfile::power(1.0);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ms_report_k(s, geo, f, k));
}
BENCHMARK(BM_MichaelSimonReport)->DenseRange(1, 3);

void BM_FlowStep(benchmark::State& state) {
  const FlowState s =
      make_state(make_perturbed_sphere(grid_for(GridMode::axisym, 2, static_cast<int>(state.range(0))), 1.5, 0.05, 2));
  const FlowConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(step(s, cfg));
}
BENCHMARK(BM_FlowStep)->Arg(64)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
