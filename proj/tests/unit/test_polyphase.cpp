#include <doctest.h>

#include <cmath>
#include <random>

#include "friable/polyphase.hpp"
#include "../support/oracle.hpp"

using namespace friable;

namespace {

// Sum_j c_j binom(n, j) mod 1 computed directly.
Rational eval_binomial(const std::vector<Rational>& alpha, std::int64_t n) {
  Rational s = 0;
  Rational b = 1;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (j > 0) b = b * Rational(n - std::int64_t(j) + 1) / Rational(std::int64_t(j));
    s += alpha[j] * b;
  }
  return frac(s);
}

Rational eval_monomial(const std::vector<Rational>& beta, std::int64_t n) {
  Rational s = 0, pw = 1;
  for (const auto& b : beta) {
    s += b * pw;
    pw *= n;
  }
  return frac(s);
}

}  // namespace

TEST_CASE("basis conversions") {
  const PolyMod1 lin = PolyMod1::from_monomial(std::vector<Rational>{0, Rational(2, 7)});
  CHECK(lin.alpha() == std::vector<Rational>{0, Rational(2, 7)});
  const PolyMod1 sq = PolyMod1::from_monomial(std::vector<Rational>{0, 0, 1});
  CHECK(sq.alpha() == std::vector<Rational>{0, 0, 0});
  const PolyMod1 c = PolyMod1::from_monomial(std::vector<Rational>{Rational(3, 5)});
  CHECK(c.alpha() == std::vector<Rational>{Rational(3, 5)});
  // n^2 / 2 = binom(n, 2) + n / 2.
  const PolyMod1 half = PolyMod1::from_monomial(std::vector<Rational>{0, 0, Rational(1, 2)});
  CHECK(half.alpha() == std::vector<Rational>{0, Rational(1, 2), 0});
}

TEST_CASE("random rational round trips") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = static_cast<int>(rng() % 9);
    std::vector<Rational> alpha(d + 1), beta(d + 1);
    for (int j = 0; j <= d; ++j) {
      const std::int64_t q = 1 + static_cast<std::int64_t>(rng() % 10000);
      alpha[j] = Rational(static_cast<std::int64_t>(rng() % q), q);
      const std::int64_t q2 = 1 + static_cast<std::int64_t>(rng() % 10000);
      beta[j] = Rational(static_cast<std::int64_t>(rng() % q2), q2);
    }
    CHECK(monomial_to_binomial(binomial_to_monomial(alpha)) == alpha);
    const PolyMod1 p = PolyMod1::from_monomial(beta);
    const PolyMod1 b = PolyMod1::from_binomial(alpha);
    for (std::int64_t n : {0, 1, 2, 5, 17, 999, -3}) {
      CHECK(eval_binomial(p.alpha(), n) == eval_monomial(beta, n));
      CHECK(p.eval_exact(n) == eval_monomial(beta, n));
      CHECK(b.eval_exact(n) == eval_binomial(alpha, n));
    }
  }
}

TEST_CASE("phases match exact evaluation") {
  const PolyMod1 p = PolyMod1::parse("0.125,1/3,0.7071067811865476,1/101");
  for (std::uint64_t n : {1ULL, 12ULL, 1000ULL, 987654ULL}) {
    double exact = static_cast<double>(p.eval_exact(static_cast<std::int64_t>(n)));
    if (exact >= 0.5) exact -= 1;
    CHECK(p.phase(n) == doctest::Approx(exact).epsilon(1e-13));
  }
  CHECK(p.degree() == 3);
  CHECK(PolyMod1::parse("0.25").degree() == 0);
  CHECK_THROWS_AS(PolyMod1::parse("1/0"), DomainError);
  CHECK_THROWS_AS(PolyMod1::parse("abc"), DomainError);
  CHECK_THROWS_AS(PolyMod1::from_monomial(std::vector<double>(32, 0.5)), DomainError);
  CHECK(exact_rational(0.1) != Rational(1, 10));
  CHECK(static_cast<double>(exact_rational(0.1)) == 0.1);
}

TEST_CASE("smoothness norm") {
  const std::uint64_t N = 10;
  CHECK(smoothness_norm(PolyMod1::parse("0.3"), N) == 0.0);
  const double beta = std::sqrt(2.0) - 1;
  const PolyMod1 lin = PolyMod1::from_monomial(std::vector<double>{0, beta});
  CHECK(smoothness_norm(lin, 1000) == doctest::Approx(1000 * beta).epsilon(1e-14));
  // n/2 + n^2/3: alpha_1 = 1/2 + 1/3, alpha_2 = 2/3.
  const PolyMod1 p = PolyMod1::parse("0,1/2,1/3");
  CHECK(smoothness_norm(p, N) == doctest::Approx(std::max(10.0 / 6.0, 100.0 / 3.0)));
  // Adding an integer polynomial changes nothing.
  const PolyMod1 shifted = PolyMod1::parse("3,5/2,7/3");
  CHECK(smoothness_norm(shifted, N) == smoothness_norm(p, N));
  CHECK(distance_to_integer(Rational(7, 4)) == 0.25);
}

TEST_CASE("correlations") {
  WTrickOptions o;
  o.w_override = 5;
  const WTrick wt = build_wtrick(100000, 1, 1, o);
  const SmoothWindow w(1, 150);
  const PolyMod1 zero = PolyMod1::parse("0");
  const auto mean = phase_correlation(100000, w, wt, zero);
  CHECK(mean.imag() == 0.0);
  // Triangle bound: |sum (g - 1)| <= sum (g + 1).
  const PolyMod1 p = PolyMod1::from_monomial(std::vector<double>{0, std::sqrt(2.0) - 1});
  const auto corr = phase_correlation(100000, w, wt, p);
  CHECK(std::abs(corr) <= mean.real() + 2.0 + 1e-9);
  // A 1/3-periodic phase splits by residue class of m mod 3.
  const PolyMod1 third = PolyMod1::parse("0,1/3");
  const auto split = phase_correlation(100000, w, wt, third);
  std::complex<double> expect = 0;
  const std::uint64_t Q = wt.modulus();
  for (std::uint64_t m = 1; m <= (100000 - wt.A) / Q; ++m) {
    const double g = tricked([&](std::uint64_t n) { return weight_g(n, w); }, wt, m);
    expect += (g - 1.0) * e_of(static_cast<double>(m % 3) / 3.0);
  }
  expect *= double(Q) / 100000.0;
  CHECK(std::abs(split - expect) <= 0.02 * std::abs(expect) + 1e-3);

  WTrickOptions none;
  none.w_override = 2;
  const WTrick plain = build_wtrick(1000000, 1, 1, none);
  CHECK(plain.W == 1);
  CHECK(std::abs(cramer_phase_correlation(100000, 2, plain, p)) == 0.0);
  CHECK(std::abs(cramer_phase_correlation(1000000, 10, plain, zero)) <= 0.05);
  CHECK(std::abs(cramer_phase_correlation(1000000, 10, plain, p)) <= 0.05);
}
