#include <benchmark/benchmark.h>

#include <cmath>

#include "gaussmink/analysis.hpp"
#include "gaussmink/instances.hpp"
#include "gaussmink/solver.hpp"

using namespace gaussmink;

namespace {

PseudoCone planar_shape(std::size_t m) {
  CounterRng rng(42 + m);
  return random_planar_instance(rng, m).shape();
}

PseudoCone octant_shape() {
  const auto c = octant();
  Vec u1(3), u2(3);
  u1 << -1, -1, -1;
  u2 << -2, -1, -1;
  Vec h(2);
  h << 0.9, 1.0;
  return PseudoCone(c, validate_directions(c, {u1.normalized(), u2.normalized()}), h);
}

void BM_PlanarVolume(benchmark::State& state) {
  const auto k = planar_shape(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_volume(k).value);
}
BENCHMARK(BM_PlanarVolume)->Arg(1)->Arg(4)->Arg(8);

void BM_PlanarSurfaceMeasure(benchmark::State& state) {
  const auto k = planar_shape(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sp_measure_vector(k, 0.5).values.sum());
}
BENCHMARK(BM_PlanarSurfaceMeasure)->Arg(1)->Arg(4)->Arg(8);

void BM_RadialTransform(benchmark::State& state) {
  const auto k = planar_shape(4);
  const auto f = gaussian_surface_density(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(radial_transform_integral(k, f).value);
}
BENCHMARK(BM_RadialTransform);

void BM_MonteCarloVolume(benchmark::State& state) {
  const auto k = octant_shape();
  EstimatorConfig cfg;
  cfg.n_samples = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_volume(k, cfg).value);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarloVolume)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_SolvePlanar(benchmark::State& state) {
  CounterRng rng(7);
  const auto inst = random_planar_instance(rng, static_cast<std::size_t>(state.range(0)));
  const DiscreteMeasure mu(random_vector(inst.omega.size(), rng, 0.2, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(solve(inst.cone, inst.omega, mu, 0.5).rel_residual);
}
BENCHMARK(BM_SolvePlanar)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_NonUniquePair(benchmark::State& state) {
  Vec v(2);
  v << -std::sqrt(0.5), -std::sqrt(0.5);
  const auto c = quarter_plane();
  for (auto _ : state) benchmark::DoNotOptimize(find_nonunique_pair(c, v, 0.5).t1);
}
BENCHMARK(BM_NonUniquePair)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
