#pragma once

// Frequencies on R/Z and exact reduction of theta * n^k modulo 1.
//
// A frequency is stored as an exact rational a/q plus a binary64 offset eta.
// A plain double theta is the case a/q = 0/1. The phase of n is reduced in
// two independent pieces: a * n^k mod q in integer arithmetic, and eta * n^k
// mod 1 by splitting eta = M * 2^E and multiplying M by n^k modulo 2^-E in
// wrapping 128-bit arithmetic. Both pieces are exact; the only rounding is
// the final conversion to a double in [-1/2, 1/2).

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>

namespace friable {

using u128 = unsigned __int128;

class Frequency {
 public:
  Frequency() = default;

  // The real number theta, taken exactly as the binary64 value given.
  static Frequency real(double theta) { return Frequency(0, 1, theta); }
  // a/q + offset, with the rational part exact.
  static Frequency rational(std::int64_t a, std::uint64_t q, double offset = 0.0);

  std::int64_t numerator() const { return num_; }      // in [0, q)
  std::uint64_t denominator() const { return den_; }
  double offset() const { return offset_; }

  // Closest long double to the frequency (used only for continued fractions
  // and reporting, never for phase evaluation).
  long double approx() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_) +
           static_cast<long double>(offset_);
  }

  Frequency negated() const;

  std::string describe() const;

 private:
  Frequency(std::int64_t num, std::uint64_t den, double offset)
      : num_(num), den_(den), offset_(offset) {}

  std::int64_t num_ = 0;
  std::uint64_t den_ = 1;
  double offset_ = 0.0;
};

// x^k modulo 2^128 (wrapping).
inline u128 wrapping_pow(std::uint64_t x, int k) {
  u128 r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// x^k mod m, exact.
std::uint64_t pow_mod_u64(std::uint64_t x, int k, std::uint64_t m);

// The representative of t mod 1 in [-1/2, 1/2), given t exactly as
// (sign) * mantissa * 2^exponent times the integer `factor`. Exact up to the
// final rounding to double. Symmetric: negating the input negates the output
// except at the point -1/2.
double centered_frac_product(double value, u128 factor);

// Centered representative of theta * n^k mod 1.
double centered_phase(const Frequency& theta, std::uint64_t n, int k);

// ||theta * n^k||, the distance to the nearest integer.
inline double distance_to_integer(const Frequency& theta, std::uint64_t n,
                                  int k) {
  return std::abs(centered_phase(theta, n, k));
}

// e(t) = exp(2 pi i t).
inline std::complex<double> e_of(double t) {
  const double angle = 2.0 * std::numbers::pi * t;
  return {std::cos(angle), std::sin(angle)};
}

// e(num / den) with the eighth roots of unity reproduced exactly.
std::complex<double> unit_root(std::uint64_t num, std::uint64_t den);

}  // namespace friable
