#include <doctest.h>

#include <cmath>

#include "friable/weights.hpp"
#include "../support/oracle.hpp"

using namespace friable;

TEST_CASE("weight g") {
  const SmoothWindow w(1, 2);
  // Psi(8, [1, 2]) = #{1, 2, 4, 8}.
  CHECK(weight_g(8, w) == doctest::Approx(8.0 / (solve_alpha(8, 2).alpha * 4)));
  CHECK(weight_g(6, w) == 0.0);
  CHECK(weight_g(9, SmoothWindow(3, 3)) > 0);
  CHECK_THROWS_AS(weight_g(1, w), DomainError);
}

TEST_CASE("range weights agree with pointwise weights up to the bucket") {
  const SmoothWindow w(1, 50);
  const AlphaCache cache(50);
  std::size_t seen = 0;
  for_each_weight_g(5000, 6000, w, cache, [&](std::uint64_t n, double g) {
    CHECK(oracle::is_smooth(n, 1, 50));
    CHECK(g == doctest::Approx(weight_g(n, w)).epsilon(0.02));
    ++seen;
  });
  CHECK(seen == psi(5999, w) - psi(4999, w));
  CHECK(AlphaCache::bucket(1) == 0);
  CHECK(AlphaCache::bucket(std::uint64_t(std::exp(1.0) * 1e4)) ==
        static_cast<std::int64_t>(std::floor(64 * std::log(std::exp(1.0) * 1e4))));
}

TEST_CASE("weight h") {
  const SmoothWindow w(1, 100);
  const std::uint64_t N = 100000;
  const WeightH h(N, w);
  CHECK(h.psi_anchor() == psi(N, w));
  // 100000 = 2^5 5^5 is smooth and the exponents collapse at n = N.
  CHECK(h(N) == doctest::Approx(double(N) / (h.alpha() * double(h.psi_anchor()))));
  CHECK(h(N + 1) == (oracle::is_smooth(N + 1, 1, 100) ? h.smooth_value(N + 1) : 0.0));
  CHECK(h(100003) == 0.0);  // prime
  CHECK_THROWS_AS(h(N - 1), DomainError);
  CHECK_THROWS_AS(h(2 * N + 1), DomainError);
  CHECK(weight_h(2 * N, N, w) == h(2 * N));
}

TEST_CASE("W-trick") {
  WTrickOptions o;
  o.w_override = 5;
  const WTrick wt = build_wtrick(1000000, 1, 1, o);
  CHECK(wt.W == 6);
  CHECK(wt.A == 1);
  CHECK(wt.density() == doctest::Approx(1.0 / 3.0));
  o.inclusive = true;
  CHECK(build_wtrick(1000000, 1, 1, o).W == 30);
  o.inclusive = false;
  CHECK(build_wtrick(1000000, 4, 1, o).A == 5);
  CHECK(build_wtrick(1000000, 1, 3, o).modulus() == 18);
  CHECK_THROWS_AS(build_wtrick(1000000, 1, 5, o), HypothesisError);
  // log log log 10^8 < 1, so w(N) is tiny and W is the empty product.
  const WTrick tiny = build_wtrick(100000000, 1, 1);
  CHECK(tiny.W == 1);
  CHECK(tiny.w_of_n == doctest::Approx(0.5 * std::log(std::log(std::log(1e8)))));
  CHECK_THROWS_AS(build_wtrick(1000, 1, 1), DomainError);
  o.w_override = 200;
  CHECK_THROWS_AS(build_wtrick(1000000, 1, 1, o), CapacityError);
}

TEST_CASE("tricked weights") {
  WTrickOptions o;
  o.w_override = 5;
  const WTrick wt = build_wtrick(1000000, 1, 1, o);
  const auto id = [](std::uint64_t n) { return double(n); };
  CHECK(tricked(id, wt, 10) == doctest::Approx(61.0 / 3.0));
  const SmoothWindow w(1, 7);
  const auto g = [&](std::uint64_t n) { return weight_g(n, w); };
  CHECK(tricked(g, wt, 2) == 0.0);  // 13
  CHECK(tricked(g, wt, 8) > 0.0);   // 49
}

TEST_CASE("bump function") {
  const BumpFunction chi;
  CHECK(chi(0) == 1.0);
  CHECK(chi(0.5) == 1.0);
  CHECK(chi(1.0) == 0.0);
  CHECK(chi(-1.0) == 0.0);
  for (double t = -1.2; t <= 1.2; t += 0.01) {
    CHECK(chi(t) >= 0.0);
    CHECK(chi(t) <= 1.0);
    CHECK(chi(t) == chi(-t));
  }
}

TEST_CASE("majorants") {
  const BumpFunction chi;
  CHECK(gpy_majorant(1, 10) == doctest::Approx(std::log(10.0)));
  CHECK(gpy_majorant(13, 10) == doctest::Approx(std::log(10.0)));
  const double l2 = std::log(2.0) / std::log(10.0), l3 = std::log(3.0) / std::log(10.0),
               l6 = std::log(6.0) / std::log(10.0);
  const double s = chi(0) - chi(l2) - chi(l3) + chi(l6);
  CHECK(gpy_majorant(6, 10) == doctest::Approx(std::log(10.0) * s * s));
  for (std::uint64_t n = 1; n < 500; ++n) CHECK(gpy_majorant(n, 7) >= 0.0);

  CHECK(cramer_model(17, 2) == 1.0);
  CHECK(cramer_model(17, 3) == 2.0);
  CHECK(cramer_model(18, 3) == 0.0);
  CHECK(cramer_model(77, 10) == 0.0);
  CHECK(cramer_model(121, 10) == doctest::Approx(210.0 / 48.0));
  CompensatedSum<double> mean;
  for (std::uint64_t n = 1; n <= 1000000; ++n) mean.add(cramer_model(n, 20));
  CHECK(std::abs(mean.value() / 1e6 - 1) <= 0.05);
}
