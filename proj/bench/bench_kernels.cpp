// Serial vs parallel timings of the three grid kernels.

#include <benchmark/benchmark.h>

#include "support.hpp"

using namespace nvfix;
using namespace nvfix::testing;

namespace {

Execution mode(const benchmark::State &state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

// 3-torus map with a large cokernel: many classes and fixed points.
IntMatrix big_torus_matrix(long k) {
  return IntMatrix::from_rows({{k, 1, 0}, {0, k, 1}, {1, 0, k}});
}

void BM_DeterminantTable(benchmark::State &state) {
  const auto inv = invariant_subgroup(fixture("hantzsche_wendt_triple").morphism());
  const auto fine = make_invariant_data(hw_scaling(3), inv.S.scaled(4));
  for (auto _ : state)
    benchmark::DoNotOptimize(determinant_table(fine, mode(state)));
}

void BM_ReidemeisterTrace(benchmark::State &state) {
  const NvMorphism f = torus_morphism(big_torus_matrix(state.range(1)));
  const ReidemeisterContext ctx(f, invariant_subgroup(f));
  for (auto _ : state)
    benchmark::DoNotOptimize(reidemeister_trace(ctx, {mode(state), false}));
}

void BM_EnumerateFixedPoints(benchmark::State &state) {
  const IntMatrix a = big_torus_matrix(state.range(1));
  const NvMorphism f = torus_morphism(a);
  const AffineLift lift = torus_lift(a, {Rational(1, 3), 0, Rational(1, 2)});
  for (auto _ : state)
    benchmark::DoNotOptimize(
        enumerate_fixed_points(lift, f, {mode(state), 1, 50'000'000}));
}

} // namespace

BENCHMARK(BM_DeterminantTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReidemeisterTrace)
    ->ArgsProduct({{0, 1}, {4, 6}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateFixedPoints)
    ->ArgsProduct({{0, 1}, {4, 6}})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
