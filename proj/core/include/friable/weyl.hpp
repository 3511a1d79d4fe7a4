#pragma once

// Smooth Weyl sums E_k(x, [y', y]; theta), Diophantine data for frequencies,
// major arcs and the descending factorization triple.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "friable/constants.hpp"
#include "friable/phase.hpp"
#include "friable/sieve.hpp"

namespace friable {

struct RationalApprox {
  std::int64_t a = 0;
  std::uint64_t q = 1;
  double err = 0;  // ||q theta|| = |q theta - a|

  // Q = q + x^k ||q theta||.
  double quality(double x, int k) const;
};

// sum over n in S(x, [y', y]) of e(theta n^k). Phases are reduced exactly;
// segments are summed in parallel and merged in order.
std::complex<double> weyl_sum(std::uint64_t x, const SmoothWindow& w, int k,
                              const Frequency& theta);

// sum_{r mod q} e(a r^k / q) Psi(x; q, r), the same sum for theta = a/q
// computed from residue counts.
std::complex<double> weyl_sum_by_residues(std::uint64_t x,
                                          const SmoothWindow& w, int k,
                                          std::int64_t a, std::uint64_t q);

// Continued-fraction convergents a/q of theta with q <= q_max, in order of
// increasing q (one entry per q). Exact integer arithmetic for a purely
// rational frequency.
std::vector<RationalApprox> convergents(const Frequency& theta,
                                        std::uint64_t q_max);

// The last convergent with q <= q_max. Throws DomainError if q_max < 1.
RationalApprox dirichlet_approx(const Frequency& theta, std::uint64_t q_max);

struct MajorArc {
  bool member = false;
  // Closest pair found (smallest |q theta - a|); a member witness when
  // member is true.
  RationalApprox witness;
  double radius = 0;  // Q x^-k
};

// Whether theta mod 1 lies in the union of {|q theta - a| <= Q x^-k} over
// coprime 0 <= a < q <= Q. Searched over convergents and intermediate
// fractions, which contain every best approximation.
MajorArc major_arc_member(const Frequency& theta, double Q, double x, int k);

struct FactorTriple {
  std::uint64_t u = 1;
  std::uint64_t v = 1;
  std::uint64_t p = 1;
  std::uint64_t n = 1;
};

// v is the product of the largest prime factors of n (with multiplicity, in
// decreasing order) up to the first partial product exceeding M, p the last
// prime taken, u = n / v. Throws DomainError if n <= M or n is not in S(w).
FactorTriple factor_triple(std::uint64_t n, std::uint64_t M,
                           const SmoothWindow& w);
// Same, reading the factorization from lpf chains of a table that covers
// [1, n].
FactorTriple factor_triple(std::uint64_t n, std::uint64_t M,
                           const SmoothWindow& w, const FactorTable& table);

// u v = n, p | v, v in S([p, y]), M < v <= M p, u in S([y', p]).
bool triple_is_valid(const FactorTriple& t, std::uint64_t M,
                     const SmoothWindow& w);

struct DichotomyReport {
  double ratio = 0;  // |E| / Psi
  std::complex<double> sum;
  std::uint64_t psi = 0;
  double alpha = 1;
  MajorArc arc;  // at Q = x^(1/12)
  RationalApprox witness;  // minimal Q over convergents with q <= x^0.1
  double quality = 1;  // Q of the witness
  double envelope_major = 0;  // Q^(-c + 2(1 - alpha)) (log x)^5
  double envelope_minor = 0;  // x^(-c) * x / Psi
  double decay = 0;  // c
  const char* branch = "major";
  bool regime_ok = false;
};

DichotomyReport dichotomy_report(std::uint64_t x, const SmoothWindow& w, int k,
                                 const Frequency& theta,
                                 const Constants& c = {});

}  // namespace friable
