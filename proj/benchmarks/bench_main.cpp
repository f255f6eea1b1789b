#include <benchmark/benchmark.h>

#include "phidual/catalog.hpp"
#include "phidual/conjugation.hpp"
#include "phidual/duality.hpp"
#include "phidual/minimax.hpp"

using namespace phidual;

static void BM_Biconjugate(benchmark::State& state) {
  const auto e = load("dc-kink");
  const auto pg = ParameterGrid(ElementaryClass::quad_minorant, {0.0, 1.0, 4.0, 9.0},
                                Grid::uniform(Box::cube(1, -16.0, 16.0),
                                              static_cast<std::size_t>(state.range(0))));
  const auto f = e.objective.sample(e.x_grid);
  for (auto _ : state) benchmark::DoNotOptimize(biconjugate_values(f, pg));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pg.size() * f.size()));
}
BENCHMARK(BM_Biconjugate)->Arg(65)->Arg(257)->Unit(benchmark::kMillisecond);

static void BM_DualValue(benchmark::State& state) {
  const auto e = load("classical-gap");
  const auto cls = state.range(0) ? DualClass::quad_minorant : DualClass::affine;
  const auto L = e.lagrangian(cls);
  for (auto _ : state) benchmark::DoNotOptimize(dual_value(L, e.x_grid, e.dual_pg(cls)));
}
BENCHMARK(BM_DualValue)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_WitnessSearch(benchmark::State& state) {
  const auto e = load("classical-gap");
  const auto L = e.lagrangian(DualClass::affine);
  const auto duals = dual_parameters(L, e.dual_pg(DualClass::affine));
  WitnessSearchOptions opts;
  opts.max_members_per_dual = 128;
  for (auto _ : state)
    benchmark::DoNotOptimize(search_intersection_witness(L, -0.75, duals,
                                                         e.x_pg(DualClass::affine), e.x_grid, opts));
}
BENCHMARK(BM_WitnessSearch)->Unit(benchmark::kMillisecond);

static void BM_Certify(benchmark::State& state) {
  const auto e = load("double-well");
  const auto L = e.lagrangian(DualClass::quad_minorant);
  for (auto _ : state)
    benchmark::DoNotOptimize(certify(L, e.x_grid, e.dual_pg(DualClass::quad_minorant)));
}
BENCHMARK(BM_Certify)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
