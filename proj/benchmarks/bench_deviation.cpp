#include <benchmark/benchmark.h>

#include "obsdev/deviation.hpp"
#include "obsdev/factor_space.hpp"
#include "obsdev/random.hpp"

namespace {

using namespace obsdev;

void BM_MaxDeviation(benchmark::State& state) {
  const HermitianMatrix a = gen_hermitian(static_cast<int>(state.range(0)), 1u);
  for (auto _ : state) benchmark::DoNotOptimize(max_deviation(a));
}
BENCHMARK(BM_MaxDeviation)->RangeMultiplier(2)->Range(2, 64);

void BM_FactorNorm(benchmark::State& state) {
  const HermitianMatrix a = gen_hermitian(static_cast<int>(state.range(0)), 2u);
  for (auto _ : state) benchmark::DoNotOptimize(factor_norm(a).value);
}
BENCHMARK(BM_FactorNorm)->RangeMultiplier(2)->Range(2, 64);

void BM_Variational(benchmark::State& state) {
  const HermitianMatrix a = gen_hermitian(static_cast<int>(state.range(0)), 3u);
  for (auto _ : state) benchmark::DoNotOptimize(max_deviation_variational(a, 8, 4u).value);
}
BENCHMARK(BM_Variational)->RangeMultiplier(2)->Range(2, 16);

void BM_WitnessState(benchmark::State& state) {
  const HermitianMatrix a = gen_hermitian(static_cast<int>(state.range(0)), 5u);
  for (auto _ : state) benchmark::DoNotOptimize(witness_state(a).amplitudes().data());
}
BENCHMARK(BM_WitnessState)->RangeMultiplier(2)->Range(2, 64);

void BM_ProjectionPath(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const HermitianMatrix p = gen_projection(n, n / 2, 6u);
  const HermitianMatrix q = gen_projection(n, n / 2, 7u);
  const int steps = minimal_path_steps(p, q);
  for (auto _ : state) benchmark::DoNotOptimize(projection_path(p, q, steps).size());
}
BENCHMARK(BM_ProjectionPath)->RangeMultiplier(2)->Range(2, 32);

void BM_Distinguish(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const HermitianMatrix p = gen_projection(n, n / 2, 8u);
  const HermitianMatrix q = gen_projection(n, n / 2, 9u);
  for (auto _ : state) benchmark::DoNotOptimize(distinguish_projections(p, q).has_value());
}
BENCHMARK(BM_Distinguish)->RangeMultiplier(2)->Range(2, 32);

}  // namespace
