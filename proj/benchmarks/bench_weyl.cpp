#include <benchmark/benchmark.h>

#include <cmath>

#include "friable/phase.hpp"
#include "friable/weyl.hpp"

namespace {

void BM_CenteredPhase(benchmark::State& state) {
  const auto theta = friable::Frequency::real(std::sqrt(2.0) - 1);
  std::uint64_t n = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(friable::centered_phase(theta, n, 3));
    n += 7919;
  }
}
BENCHMARK(BM_CenteredPhase);

void BM_WeylSum(benchmark::State& state) {
  const auto x = static_cast<std::uint64_t>(state.range(0));
  const friable::SmoothWindow w(1, 1000);
  const auto theta = friable::Frequency::real(std::sqrt(2.0) - 1);
  for (auto _ : state) benchmark::DoNotOptimize(friable::weyl_sum(x, w, 2, theta));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x));
}
BENCHMARK(BM_WeylSum)->Arg(1000000)->Unit(benchmark::kMillisecond);

}  // namespace
