#include <benchmark/benchmark.h>

#include "friable/saddle.hpp"
#include "friable/sieve.hpp"

namespace {

void BM_FactorTable(benchmark::State& state) {
  const auto len = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    const auto t = friable::build_factor_table(1000000000, 1000000000 + len);
    benchmark::DoNotOptimize(t.largest_factor(1000000000));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(len));
}
BENCHMARK(BM_FactorTable)->Arg(1 << 16)->Arg(1 << 20);

void BM_Psi(benchmark::State& state) {
  const auto x = static_cast<std::uint64_t>(state.range(0));
  const friable::SmoothWindow w(1, 1000);
  for (auto _ : state) benchmark::DoNotOptimize(friable::psi(x, w));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x));
}
BENCHMARK(BM_Psi)->Arg(1000000)->Arg(10000000)->Unit(benchmark::kMillisecond);

void BM_SolveAlpha(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(friable::solve_alpha(1e12, 1e5).alpha);
}
BENCHMARK(BM_SolveAlpha);

}  // namespace
