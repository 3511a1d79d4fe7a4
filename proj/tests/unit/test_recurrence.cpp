#include <doctest.h>

#include <cmath>

#include "friable/recurrence.hpp"
#include "../support/oracle.hpp"

using namespace friable;

TEST_CASE("census basics") {
  const SmoothWindow w(1, 1000);
  const RecurrenceCensus zero = census(100000, w, 1, Frequency::real(0), 0.05);
  CHECK(zero.fraction == 1.0);
  CHECK(zero.total == psi(100000, w));
  const RecurrenceCensus g = census(1000000, w, 1, Frequency::real(std::sqrt(2.0) - 1), 0.05);
  CHECK(std::abs(g.fraction - 0.1) <= 0.03);
  CHECK(g.sample.size() == RecurrenceCensus::kSampleSize);
  for (std::size_t i = 1; i < g.sample.size(); ++i) CHECK(g.sample[i - 1] < g.sample[i]);
  CHECK_THROWS_AS(census(1000, w, 1, Frequency::real(0.1), 0.0), DomainError);
  CHECK_THROWS_AS(census(1000, w, 1, Frequency::real(0.1), 0.5), DomainError);
  CHECK_THROWS_AS(census(1000, w, 0, Frequency::real(0.1), 0.1), DomainError);
}

TEST_CASE("census symmetries") {
  const SmoothWindow w(2, 300);
  const double t = 0.2718281828459045;
  for (int k : {1, 2}) {
    const auto a = census(100000, w, k, Frequency::real(t), 0.03).hits;
    CHECK(a == census(100000, w, k, Frequency::real(-t), 0.03).hits);
    CHECK(a == census(100000, w, k, Frequency::rational(1, 1, t), 0.03).hits);
  }
}

TEST_CASE("rational census equals divisibility count") {
  const SmoothWindow w(1, 200);
  const std::uint64_t N = 100000;
  for (std::uint64_t q : {2, 3, 7, 12, 50}) {
    for (int k : {1, 2}) {
      // eps below 1/q keeps only the class q | n^k.
      const RecurrenceCensus c = census(N, w, k, Frequency::rational(1, q), 0.5 / double(q));
      std::uint64_t expect = 0;
      const auto res = psi_residues(N, w, q);
      for (std::uint64_t r = 0; r < q; ++r) {
        std::uint64_t rk = 1;
        for (int i = 0; i < k; ++i) rk = rk * r % q;
        if (rk == 0) expect += res[r];
      }
      CHECK(c.hits == expect);
    }
  }
}

TEST_CASE("closed condition") {
  // ||n / 4|| equals 1/4 exactly on odd n; only n = 2 mod 4 misses.
  const SmoothWindow w(1, 10);
  const RecurrenceCensus c = census(1000, w, 1, Frequency::rational(1, 4), 0.25);
  CHECK(c.hits == c.total - psi_progression(1000, w, 4, 2));
}

TEST_CASE("denominator recovery") {
  const SmoothWindow w(1, 1000);
  const RecurrenceCensus c = census(100000, w, 1, Frequency::rational(1, 7, 1e-12), 0.05);
  const RecoveredDenominator r = recover_q(c, 10000, 1000000);
  CHECK(r.q == 7);
  CHECK(r.err == doctest::Approx(7e-12).epsilon(1e-6));
  CHECK(r.certified);
  const RecoveredDenominator z = recover_q(census(1000, w, 1, Frequency::real(0), 0.1), 100, 1000);
  CHECK(z.q == 1);
  CHECK(z.err == 0.0);
  const RecurrenceCensus irr = census(100000, w, 1, Frequency::real(std::sqrt(2.0) - 1), 0.05);
  // Denominators beyond delta^-kappa are not admissible; below that the
  // irrational frequency has no certificate.
  CHECK_FALSE(recover_q(irr, 100, 1000000).certified);
  CHECK_THROWS_AS(recover_q(c, 0, 1000), DomainError);
  for (std::uint64_t q = 1; q <= 20; ++q) {
    for (std::uint64_t a = 0; a < q; ++a) {
      if (oracle::gcd(a, q) != 1) continue;
      const auto cs = census(20000, w, 1, Frequency::rational(a, q, 1e-12), 0.05);
      CHECK(recover_q(cs, 10000, 1000000).q == q);
    }
  }
}

TEST_CASE("bootstrap audit") {
  const SmoothWindow w(1, 1000);
  const BootstrapReport zero = bootstrap_audit(Frequency::real(0), 1, 100000, w, 1000, 0.01, 0.1);
  CHECK(zero.hypothesis_ok);
  CHECK(zero.branch_large);
  CHECK(zero.hits == zero.set_size);
  CHECK(zero.intervals >= 100);
  CHECK(zero.delta_obs >= 1.0);
  const BootstrapReport tiny = bootstrap_audit(Frequency::real(1e-12), 1, 1000000, w, 1000, 0.01, 0.1);
  CHECK(tiny.hypothesis_ok);
  CHECK(tiny.branch_large);
  CHECK_FALSE(bootstrap_audit(Frequency::real(0.3), 1, 100000, w, 1000, 0.01, 0.1).hypothesis_ok);
  CHECK(bootstrap_audit(Frequency::real(0.3), 1, 100000, w, 1000, 0.01, 0.1).set_size ==
        psi(200000, w) - psi(99999, w));
  CHECK_THROWS_AS(bootstrap_audit(Frequency::real(0), 1, 1000, w, 0, 0.01, 0.1), DomainError);
  CHECK_THROWS_AS(bootstrap_audit(Frequency::real(0), 1, 1000, w, 10, 1.5, 0.1), DomainError);
}
