#include <doctest.h>

#include <cmath>

#include "friable/linsys.hpp"
#include "../support/oracle.hpp"

using namespace friable;

namespace {

LinearSystem abc_system() {
  return parse_descriptor(
             "s 2\nr 3\nform 1 0\nform 0 1\nform 1 1\nbody simplex\n"
             "vertex 0 0\nvertex 1 0\nvertex 0 1\n")
      .system;
}

LinearSystem identity_system() {
  return parse_descriptor("s 2\nr 1\nform 1 0\nbody box 0 1 0 1\n").system;
}

}  // namespace

TEST_CASE("local factors of A + B = C") {
  const LinearSystem sys = abc_system();
  CHECK(local_factor(sys, 2).beta == 0.0);
  // (p - 1)(p - 2) survivors times (p / (p - 1))^3 over p^2.
  for (std::uint64_t p : {3, 5, 7, 101, 997}) {
    const double pd = double(p);
    CHECK(local_factor(sys, p).beta == doctest::Approx(pd * (pd - 2) / ((pd - 1) * (pd - 1))).epsilon(1e-14));
  }
  for (std::uint64_t p : {2, 3, 5, 7, 11, 101, 313}) {
    CHECK(local_factor(sys, p, FactorMethod::enumeration).beta ==
          local_factor(sys, p, FactorMethod::inclusion_exclusion).beta);
  }
  CHECK(local_factor(sys, 5003).method == FactorMethod::inclusion_exclusion);
  CHECK(local_factor(sys, 13).method == FactorMethod::enumeration);
  CHECK_THROWS_AS(local_factor(sys, 9), DomainError);
  CHECK(singular_series(sys, 2).value == 1.0);
  CHECK(singular_series(sys, 10).value == 0.0);
}

TEST_CASE("identity system") {
  const LinearSystem sys = identity_system();
  for (std::uint64_t p : {2, 3, 5, 7919}) CHECK(local_factor(sys, p).beta == 1.0);
  CHECK(singular_series(sys, 1000).value == 1.0);
  const SmoothWindow all(1, 30);
  const CountResult r = count_solutions(sys, 30, all, false);
  // Every n1 in [0, 30] with n1 in S is counted 31 times; 0 is not smooth.
  CHECK(r.value == 30.0 * 31.0);
  CHECK(r.lattice_points == 31 * 31);
}

TEST_CASE("shifted forms and skew systems against brute force") {
  const LinearSystem sys =
      parse_descriptor("s 2\nr 2\nform 2 1\nform 1 -1\nshift 1 1\nbody box 0 1/2 0 1/3\n").system;
  for (std::uint64_t p : {2, 3, 5, 7}) {
    std::uint64_t survive = 0;
    for (std::uint64_t u = 0; u < p; ++u) {
      for (std::uint64_t v = 0; v < p; ++v) {
        const auto f1 = (2 * u + v + 1) % p;
        const auto f2 = ((u + p - v) % p + 1) % p;
        survive += (f1 != 0 && f2 != 0);
      }
    }
    const double expect = double(survive) / double(p * p) * std::pow(double(p) / double(p - 1), 2);
    CHECK(local_factor(sys, p).beta == doctest::Approx(expect).epsilon(1e-15));
    CHECK(local_factor(sys, p, FactorMethod::enumeration).beta ==
          local_factor(sys, p, FactorMethod::inclusion_exclusion).beta);
  }
  const std::uint64_t N = 300;
  const SmoothWindow w(1, 20);
  std::uint64_t brute = 0;
  for (std::int64_t a = 0; a <= 150; ++a) {
    for (std::int64_t b = 0; b <= 100; ++b) {
      const std::int64_t v1 = 2 * a + b + 1, v2 = a - b + 1;
      if (v1 >= 1 && v2 >= 1 && oracle::is_smooth(v1, 1, 20) && oracle::is_smooth(v2, 1, 20)) ++brute;
    }
  }
  const CountResult r = count_solutions(sys, N, w, false);
  CHECK(r.value == double(brute));
  CHECK(r.volume == doctest::Approx(1.0 / 6.0));
  CHECK_FALSE(r.range_ok);
}

TEST_CASE("count is invariant under swapping coordinates") {
  const LinearSystem a = parse_descriptor(
      "s 2\nr 2\nform 1 2\nform 3 1\nbody box 0 1/2 0 1/4\n").system;
  const LinearSystem b = parse_descriptor(
      "s 2\nr 2\nform 2 1\nform 1 3\nbody box 0 1/4 0 1/2\n").system;
  const SmoothWindow w(1, 40);
  CHECK(count_solutions(a, 400, w, false).value == count_solutions(b, 400, w, false).value);
  CHECK(count_solutions(a, 400, w, true).value ==
        doctest::Approx(count_solutions(b, 400, w, true).value).epsilon(1e-12));
}

TEST_CASE("descriptor parsing") {
  const std::string text =
      "# demo\ns 2\nr 3\nform 1 0\nform 0 1\nform 1 1\nshift 0 0 0\n"
      "body simplex\nvertex 0 0\nvertex 1/2 0\nvertex 0 0.5\nN 1000\ny 31.5\nyprime 3\n";
  const SystemDescriptor d = parse_descriptor(text);
  CHECK(d.N == 1000u);
  CHECK(d.y == 31.5);
  CHECK(d.y_lo == 3.0);
  CHECK(d.system.body.volume() == Rational(1, 8));
  const std::string canon = canonical_descriptor(d);
  CHECK(canonical_descriptor(parse_descriptor(canon)) == canon);
  CHECK_THROWS_AS(parse_descriptor("s 2\nr 2\nform 1 1\nform 2 2\nbody box 0 1 0 1\n"), DomainError);
  CHECK_THROWS_AS(parse_descriptor("s 2\nr 1\nform 1 0\nbody box 0 2 0 1\n"), DomainError);
  CHECK_THROWS_AS(parse_descriptor("s 2\nr 1\nform 1 0\nbody simplex\nvertex 0 0\nvertex 1 1\nvertex 1/2 1/2\n"),
                  DomainError);
  CHECK_THROWS_AS(parse_descriptor("s 2\nr 1\nform 1 0\n"), DomainError);
  CHECK_THROWS_AS(parse_descriptor("s 2\nr 1\nform x 0\nbody box 0 1 0 1\n"), DomainError);
}

TEST_CASE("abc census") {
  const SmoothWindow w(1, 100);
  const AbcResult r = abc_census(2000, w, false);
  std::uint64_t brute = 0, coprime = 0;
  for (std::uint64_t a = 1; a < 2000; ++a) {
    if (!oracle::is_smooth(a, 1, 100)) continue;
    for (std::uint64_t b = 1; a + b <= 2000; ++b) {
      if (oracle::is_smooth(b, 1, 100) && oracle::is_smooth(a + b, 1, 100)) {
        ++brute;
        coprime += oracle::gcd(a, b) == 1;
      }
    }
  }
  CHECK(r.count == brute);
  CHECK(abc_census(2000, w, true).count == coprime);
  CHECK(r.psi == psi(2000, w));
  CHECK(r.predicted == doctest::Approx(std::pow(double(r.psi), 3) / 4000.0));
  const AbcResult all = abc_census(1000, SmoothWindow(1, 1000), false);
  CHECK(all.count == 999u * 1000u / 2u);
  CHECK(abc_census(5, SmoothWindow(7, 100), false).count == 0);
  CHECK_THROWS_AS(abc_census(200000, w, false), CapacityError);
}
