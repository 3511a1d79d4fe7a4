#pragma once

// Polynomials modulo 1 in the monomial and binomial-coefficient bases,
//
//   P(n) = sum_j beta_j n^j = sum_j alpha_j binom(n, j)  (mod 1),
//
// the smoothness norm sup_j N^j ||alpha_j||, and correlations of weighted
// smooth indicators with e(P(n)).
//
// Coefficients are exact rationals; a double coefficient is converted
// exactly. Note that beta mod 1 does not determine alpha mod 1 (n^2/2 and
// n/2 agree on the integers), while alpha mod 1 is determined by the function
// on the integers. Conversions therefore preserve the function, and
// binomial -> monomial -> binomial is the identity.

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "friable/phase.hpp"
#include "friable/sieve.hpp"
#include "friable/weights.hpp"

namespace friable {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kMaxPolyDegree = 30;

// r mod 1 in [0, 1).
Rational frac(const Rational& r);
// The binary64 value as an exact rational.
Rational exact_rational(double value);
// ||r||, distance to the nearest integer.
double distance_to_integer(const Rational& r);

// alpha_j = sum_{i >= j} beta_i j! S(i, j) (mod 1).
std::vector<Rational> monomial_to_binomial(const std::vector<Rational>& beta);
// beta_i = sum_{j >= i} alpha_j s(j, i) / j! (mod 1).
std::vector<Rational> binomial_to_monomial(const std::vector<Rational>& alpha);

class PolyMod1 {
 public:
  PolyMod1() : PolyMod1(std::vector<Rational>{Rational(0)}) {}

  static PolyMod1 from_monomial(const std::vector<Rational>& beta);
  static PolyMod1 from_monomial(const std::vector<double>& beta);
  static PolyMod1 from_binomial(const std::vector<Rational>& alpha);

  // Comma-separated coefficients in the monomial basis, constant term
  // first; each entry is a decimal ("0.25", "1e-3") or a fraction ("1/3").
  static PolyMod1 parse(const std::string& text);

  int degree() const { return static_cast<int>(beta_.size()) - 1; }
  const std::vector<Rational>& beta() const { return beta_; }
  const std::vector<Rational>& alpha() const { return alpha_; }

  // P(n) mod 1 in [0, 1), exactly.
  Rational eval_exact(std::int64_t n) const;
  // P(n) mod 1 in [-1/2, 1/2), via exact phase reduction per term.
  double phase(std::uint64_t n) const;

  std::string describe() const;

 private:
  explicit PolyMod1(std::vector<Rational> beta);

  std::vector<Rational> beta_;
  std::vector<Rational> alpha_;
  std::vector<Frequency> terms_;  // beta_j as frequencies
};

// Returns p; both bases are always populated. Kept as an explicit operation
// for callers that think in terms of a conversion.
inline const PolyMod1& to_binomial_basis(const PolyMod1& p) { return p; }

// sup_{1 <= j <= d} N^j ||alpha_j||; 0 for constants.
double smoothness_norm(const PolyMod1& p, std::uint64_t N);

// (W~/N) sum_{1 <= m <= (N - A)/W~} (g^(W~,A)(m) - 1) e(P(m)).
std::complex<double> phase_correlation(std::uint64_t N, const SmoothWindow& w,
                                       const WTrick& wt, const PolyMod1& p);

// Same with (phi(W~)/W~) nu(W~ m + A) for the Cramer model nu at y'.
std::complex<double> cramer_phase_correlation(std::uint64_t N, double y_lo,
                                              const WTrick& wt,
                                              const PolyMod1& p);

}  // namespace friable
