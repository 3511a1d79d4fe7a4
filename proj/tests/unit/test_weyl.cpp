#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "friable/weyl.hpp"
#include "../support/oracle.hpp"

using namespace friable;

TEST_CASE("weyl sum basics") {
  const SmoothWindow w(1, 100);
  const std::uint64_t x = 100000;
  const auto total = static_cast<double>(psi(x, w));
  CHECK(weyl_sum(x, w, 1, Frequency::real(0)) == std::complex<double>(total, 0));
  CHECK(weyl_sum(x, w, 3, Frequency::rational(0, 1)) == std::complex<double>(total, 0));
  double alternating = 0;
  for (std::uint64_t n = 1; n <= x; ++n) {
    if (oracle::is_smooth(n, 1, 100)) alternating += (n % 2 ? -1.0 : 1.0);
  }
  CHECK(weyl_sum(x, w, 1, Frequency::real(0.5)).real() == doctest::Approx(alternating));
  const Frequency t = Frequency::real(std::sqrt(2.0) - 1);
  for (int k : {1, 2, 3}) {
    const auto s = weyl_sum(x, w, k, t);
    CHECK(std::abs(s) <= total);
    const auto c = weyl_sum(x, w, k, Frequency::real(1 - (std::sqrt(2.0) - 1)));
    CHECK(std::abs(s - std::conj(c)) < 1e-7 * total);
    const auto p = weyl_sum(x, w, k, Frequency::real(std::sqrt(2.0)));
    CHECK(std::abs(s - p) < 1e-7 * total);
  }
}

TEST_CASE("direct sum reference") {
  const SmoothWindow w(2, 30);
  const Frequency t = Frequency::real(0.123456789);
  std::complex<long double> ref = 0;
  for (std::uint64_t n = 1; n <= 20000; ++n) {
    if (!oracle::is_smooth(n, 2, 30)) continue;
    const long double ph = 2 * 3.14159265358979323846264338327950288L *
                           std::fmod(static_cast<long double>(0.123456789) * static_cast<long double>(n * n), 1.0L);
    ref += std::complex<long double>(std::cos(ph), std::sin(ph));
  }
  const auto s = weyl_sum(20000, w, 2, t);
  CHECK(std::abs(std::complex<double>(ref) - s) < 1e-8);
}

TEST_CASE("rational frequencies via residues") {
  const SmoothWindow w(1, 60);
  for (std::uint64_t q : {1, 2, 5, 12, 49}) {
    for (int k : {1, 2}) {
      const auto direct = weyl_sum(50000, w, k, Frequency::rational(1, q));
      const auto byres = weyl_sum_by_residues(50000, w, k, 1, q);
      CHECK(std::abs(direct - byres) <= 1e-9 * std::max(1.0, std::abs(byres)));
    }
  }
}

TEST_CASE("dirichlet approximation") {
  const auto half = dirichlet_approx(Frequency::real(0.5), 10);
  CHECK(half.a == 1);
  CHECK(half.q == 2);
  CHECK(half.err == 0.0);
  const auto golden = dirichlet_approx(Frequency::real((std::sqrt(5.0) - 1) / 2), 100);
  CHECK(golden.q == 89);
  CHECK(golden.a == 55);
  const auto near = dirichlet_approx(Frequency::rational(1, 7, 1e-12), 100);
  CHECK(near.q == 7);
  CHECK(near.a == 1);
  CHECK(near.err == doctest::Approx(7e-12).epsilon(1e-6));
  CHECK_THROWS_AS(dirichlet_approx(Frequency::real(0.3), 0), DomainError);
  const auto cs = convergents(Frequency::real(std::acos(-1.0) - 3), 40000);
  std::vector<std::uint64_t> qs;
  for (const auto& c : cs) qs.push_back(c.q);
  CHECK(qs == std::vector<std::uint64_t>{1, 7, 106, 113, 33102, 33215});
}

TEST_CASE("major arcs agree with brute force") {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> unit(0, 1);
  int members = 0, checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const double Q = 1 + std::floor(unit(rng) * 200);
    const double x = 1e3 * (1 + 20 * unit(rng));
    const double radius = Q / x;
    double theta = unit(rng);
    if (trial % 2 == 0) {
      // Land near a random fraction so both outcomes occur.
      const std::uint64_t q = 1 + static_cast<std::uint64_t>(unit(rng) * 250);
      const std::uint64_t a = static_cast<std::uint64_t>(unit(rng) * q);
      theta = std::fmod(double(a) / double(q) + (unit(rng) - 0.5) * 4 * radius / double(q) + 1, 1.0);
    }
    bool brute = false;
    for (std::uint64_t q = 1; q <= static_cast<std::uint64_t>(Q) && !brute; ++q) {
      for (std::uint64_t a = 0; a < q; ++a) {
        if (oracle::gcd(a, q) != 1) continue;
        if (std::abs(static_cast<long double>(q) * theta - a) <= radius) {
          brute = true;
          break;
        }
      }
    }
    const MajorArc arc = major_arc_member(Frequency::real(theta), Q, x, 1);
    CHECK_MESSAGE(arc.member == brute, "theta=", theta, " Q=", Q, " x=", x);
    if (arc.member) {
      CHECK(arc.witness.q <= Q);
      CHECK(std::abs(double(arc.witness.q) * theta - double(arc.witness.a)) <= radius * (1 + 1e-12));
    }
    members += brute;
    ++checked;
  }
  CHECK(members > 50);
  CHECK(members < checked - 50);
  CHECK(major_arc_member(Frequency::real(0), 2, 1e6, 1).member);
  CHECK_FALSE(major_arc_member(Frequency::real(std::sqrt(2.0) - 1), 10, 1e6, 1).member);
  CHECK(major_arc_member(Frequency::real(1.0 / 3), 3, 1e6, 1).member);
}

TEST_CASE("factor triples") {
  const SmoothWindow w(1, 100);
  const FactorTriple t = factor_triple(360, 10, w);
  CHECK(t.v == 15);
  CHECK(t.p == 3);
  CHECK(t.u == 24);
  const FactorTriple prime = factor_triple(97, 10, w);
  CHECK(prime.u == 1);
  CHECK(prime.v == 97);
  CHECK(prime.p == 97);
  CHECK_THROWS_AS(factor_triple(10, 10, w), DomainError);
  CHECK_THROWS_AS(factor_triple(202, 10, w), DomainError);
  const FactorTable table = build_factor_table(1, 20001);
  std::set<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> seen;
  for_each_smooth(51, 20001, w, [&](std::uint64_t n) {
    const FactorTriple a = factor_triple(n, 50, w);
    const FactorTriple b = factor_triple(n, 50, w, table);
    CHECK(a.u == b.u);
    CHECK(a.v == b.v);
    CHECK(a.p == b.p);
    CHECK(a.u * a.v == n);
    CHECK(triple_is_valid(a, 50, w));
    CHECK(seen.insert({a.u, a.v, a.p}).second);
  });
}

TEST_CASE("dichotomy report") {
  const SmoothWindow w(1, 1000);
  const DichotomyReport zero = dichotomy_report(1000000, w, 1, Frequency::real(0));
  CHECK(zero.ratio == 1.0);
  CHECK(std::string(zero.branch) == "major");
  CHECK(zero.quality == 1.0);
  const DichotomyReport third = dichotomy_report(1000000, w, 1, Frequency::rational(1, 3));
  CHECK(std::string(third.branch) == "major");
  CHECK(third.ratio >= 0.1);
  const DichotomyReport irr = dichotomy_report(1000000, w, 1, Frequency::real(std::sqrt(2.0) - 1));
  CHECK(std::string(irr.branch) == "minor");
  CHECK(irr.ratio <= 0.05);
}
