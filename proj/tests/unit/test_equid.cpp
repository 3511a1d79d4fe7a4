#include <doctest.h>

#include <cmath>

#include "friable/equid.hpp"
#include "friable/weights.hpp"
#include "../support/oracle.hpp"

using namespace friable;

TEST_CASE("residue table sums to the coprime count") {
  const SmoothWindow w(7, 500);
  const std::uint64_t x = 200000;
  for (std::uint64_t q : {1, 2, 4, 6, 30}) {
    const ProgressionReport r = progression_equid(x, w, q);
    std::uint64_t total = 0, coprime = 0;
    for (const auto& row : r.rows) {
      CHECK(oracle::gcd(row.a, q) == 1);
      total += row.count;
    }
    for (std::uint64_t n = 1; n <= x; ++n) {
      if (oracle::gcd(n, q) == 1 && oracle::is_smooth(n, 7, 500)) ++coprime;
    }
    CHECK(total == coprime);
    CHECK(r.rows.size() == euler_phi(q));
    if (q == 1) CHECK(r.max_deviation == 0.0);
  }
  CHECK_THROWS_AS(progression_equid(x, SmoothWindow(1, 500), 2), HypothesisError);
  CHECK_THROWS_AS(progression_equid(x, w, 7), HypothesisError);
}

TEST_CASE("short interval sums") {
  const SmoothWindow w(1, 200);
  const std::uint64_t N = 100000;
  const EquidReport a = short_interval_sum(N, N, N / 2, w);
  const EquidReport b = short_progression_sum(N, N, N / 2, w, 1, 0);
  CHECK(a.observed == b.observed);
  CHECK(a.predicted == b.predicted);
  CHECK(a.predicted == N / 2);
  double direct = 0;
  const WeightH h(N, w);
  for (std::uint64_t n = N + 1; n <= N + N / 2; ++n) direct += h(n);
  CHECK(a.observed == doctest::Approx(direct).epsilon(1e-12));
  CHECK_THROWS_AS(short_interval_sum(N, N - 1, 10, w), DomainError);
  CHECK_THROWS_AS(short_interval_sum(N, N, N + 1, w), DomainError);
  const SmoothWindow w3(5, 200);
  CHECK_THROWS_AS(short_progression_sum(N, N, 100, w3, 3, 0), DomainError);
  CHECK_THROWS_AS(short_progression_sum(N, N, 100, SmoothWindow(1, 200), 3, 1),
                  HypothesisError);
  const EquidReport c = short_progression_sum(N, N, N / 2, w3, 3, 1);
  CHECK(c.predicted == doctest::Approx(N / 4.0));
}

TEST_CASE("count bounds") {
  const std::uint64_t x = 1000000;
  const SmoothWindow w(1, std::pow(std::log(1e6), 3));
  const CountBoundReport r = short_interval_count_bound(x, w, {x, 1000, 1});
  std::uint64_t direct = 0;
  for (std::uint64_t n = x; n < x + 1000; ++n) {
    direct += oracle::is_smooth(n, 1, w.y_hi());
  }
  CHECK(r.observed == direct);
  CHECK(r.within);
  const CountBoundReport one = short_interval_count_bound(x, w, {x + 5, 1, 1});
  CHECK(one.observed <= 1);
  CHECK(one.within);
  CHECK_THROWS_AS(short_interval_count_bound(x, w, {x - 1, 10, 1}), DomainError);
  CHECK_THROWS_AS(short_interval_count_bound(x, w, {x, 10, 0}), DomainError);
  const CountBoundReport cor = progression_count_bound(x, w, {x, x / 20, 7}, 1.0);
  CHECK(cor.within);
}

TEST_CASE("character sums") {
  const SmoothWindow w(5, 1000);
  const auto chars = DirichletCharacter::all(3);
  const EquidReport r = character_sum_smallness(100000, w, chars[1]);
  CHECK(r.observed == doctest::Approx(std::abs(psi_character(100000, w, chars[1])) /
                                      double(psi(100000, w))));
  CHECK_THROWS_AS(character_sum_smallness(100000, w, chars[0]), DomainError);
  CHECK_FALSE(character_sum_smallness(100, w, chars[1]).regime_ok);
}
