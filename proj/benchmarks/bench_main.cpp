#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "specgap/cheeger.hpp"
#include "specgap/ergodicity.hpp"
#include "specgap/forms.hpp"
#include "specgap/geometry.hpp"

namespace {

using namespace specgap;

forms::ReversibleChain walk(int n) {
  std::vector<double> b(n - 1, 1.0), a(n - 1, 1.0);
  for (int i = 0; i + 1 < n; ++i) b[i] = 1.0 + 0.1 * i;
  return forms::birth_death_chain(b, a);
}

void BM_GeneralBound(benchmark::State& state) {
  const geometry::GeometryParams p{static_cast<int>(state.range(0)), 2.0, -1.0};
  const auto f = geometry::damped_sine_beta(p);
  for (auto _ : state) benchmark::DoNotOptimize(geometry::general_lower_bound(p, f).value);
}
BENCHMARK(BM_GeneralBound)->Arg(2)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_BoundsTable(benchmark::State& state) {
  const geometry::GeometryParams p{3, std::numbers::pi, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(geometry::bounds_table(p).rows.size());
}
BENCHMARK(BM_BoundsTable)->Unit(benchmark::kMillisecond);

void BM_CheegerEnumeration(benchmark::State& state) {
  const auto form = forms::SymmetricForm::from_chain(walk(static_cast<int>(state.range(0))));
  const auto w = cheeger::default_weight(form, 0.5);
  const cheeger::CheegerVariant v;
  for (auto _ : state) benchmark::DoNotOptimize(cheeger::cheeger_constant(form, v, w).value);
}
BENCHMARK(BM_CheegerEnumeration)->DenseRange(8, 20, 4)->Unit(benchmark::kMillisecond);

void BM_Semigroup(benchmark::State& state) {
  const auto chain = walk(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ergodicity::semigroup_matrix(chain, 1.5).sum());
}
BENCHMARK(BM_Semigroup)->RangeMultiplier(2)->Range(8, 128);

void BM_LogSobolev(benchmark::State& state) {
  const auto chain = walk(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(forms::log_sobolev_constant(chain).value);
}
BENCHMARK(BM_LogSobolev)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
