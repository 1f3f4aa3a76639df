#include <benchmark/benchmark.h>

#include <cmath>

#include "obsdev/preservers.hpp"
#include "obsdev/random.hpp"

namespace {

using namespace obsdev;

PreserverForm sample_form(int n) {
  PreserverForm form = PreserverForm::identity(n);
  form.sign = -1;
  form.u = gen_haar_unitary(n, 11u);
  form.f = gen_hermitian(n, 12u);
  return form;
}

void BM_ToMap(benchmark::State& state) {
  const PreserverForm form = sample_form(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(to_map(form).linear.matrix.data());
}
BENCHMARK(BM_ToMap)->DenseRange(2, 10, 4);

void BM_CheckPreserver(benchmark::State& state) {
  const LinearMapOnHermitians map = to_map(sample_form(static_cast<int>(state.range(0)))).linear;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        check_preserver(map, PreservedQuantity::MaxDeviation, 32, 13u, 1e-8).verdict);
  }
}
BENCHMARK(BM_CheckPreserver)->DenseRange(2, 10, 4);

void BM_DecomposeDeviation(benchmark::State& state) {
  const LinearMapOnHermitians map = to_map(sample_form(static_cast<int>(state.range(0)))).linear;
  for (auto _ : state) benchmark::DoNotOptimize(decompose_deviation_preserver(map).sign);
}
BENCHMARK(BM_DecomposeDeviation)->DenseRange(2, 10, 4);

void BM_LinearizeDv(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PreserverForm form = sample_form(n);
  const MapOracle phi = [&form](const HermitianMatrix& a) {
    return apply_form(form, a).shifted(std::sin(a.trace()));
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(linearize_dv_isometry(phi, n, 50, 14u).additivity_defect);
  }
}
BENCHMARK(BM_LinearizeDv)->DenseRange(2, 6, 2);

}  // namespace
