#include "friable/phase.hpp"

#include <cfloat>
#include <limits>
#include <sstream>

#include "friable/errors.hpp"

namespace friable {

namespace {

std::int64_t floor_mod(std::int64_t a, std::uint64_t q) {
  const auto r = static_cast<std::int64_t>(
      static_cast<__int128>(a) % static_cast<__int128>(q));
  return r < 0 ? r + static_cast<std::int64_t>(q) : r;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

// Reduce a double to [-1/2, 1/2) modulo 1.
long double center(long double t) {
  t -= std::floor(t + 0.5L);
  return t;
}

}  // namespace

Frequency Frequency::rational(std::int64_t a, std::uint64_t q, double offset) {
  if (q == 0) throw DomainError("frequency: denominator must be >= 1");
  if (!std::isfinite(offset)) throw DomainError("frequency: non-finite offset");
  std::int64_t r = floor_mod(a, q);
  const std::uint64_t g = gcd_u64(static_cast<std::uint64_t>(r), q);
  std::uint64_t den = q;
  if (g > 1) {
    r /= static_cast<std::int64_t>(g);
    den /= g;
  }
  if (r == 0) den = 1;
  return Frequency(r, den, offset);
}

Frequency Frequency::negated() const {
  return Frequency(num_ == 0 ? 0 : static_cast<std::int64_t>(den_) - num_, den_,
                   -offset_);
}

std::string Frequency::describe() const {
  std::ostringstream out;
  out.precision(17);
  if (den_ == 1 && num_ == 0) {
    out << offset_;
  } else {
    out << num_ << "/" << den_;
    if (offset_ != 0.0) out << (offset_ > 0 ? "+" : "") << offset_;
  }
  return out.str();
}

std::uint64_t pow_mod_u64(std::uint64_t x, int k, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t r = 1;
  const std::uint64_t b = x % m;
  for (int i = 0; i < k; ++i) r = static_cast<std::uint64_t>(u128(r) * b % m);
  return r;
}

double centered_frac_product(double value, u128 factor) {
  if (value == 0.0 || factor == 0) return 0.0;
  const bool negative = value < 0;
  int exponent = 0;
  const double mantissa = std::frexp(std::abs(value), &exponent);
  // |value| = m * 2^(exponent - 53) with m an integer below 2^53.
  const auto m = static_cast<std::uint64_t>(std::ldexp(mantissa, 53));
  const int shift = 53 - exponent;  // value = m / 2^shift
  long double frac = 0.0L;
  if (shift <= 0) {
    return 0.0;  // value is an integer
  } else if (shift <= 128) {
    const u128 product = factor * u128(m);  // wraps mod 2^128
    const u128 mask = shift == 128 ? ~u128(0) : ((u128(1) << shift) - 1);
    const u128 reduced = product & mask;
    // Keep the top 64 significant bits of the reduced value.
    if (shift > 64) {
      const int drop = shift - 64;
      const auto top = static_cast<std::uint64_t>(reduced >> drop);
      const auto low = static_cast<std::uint64_t>(
          reduced & ((u128(1) << drop) - 1));
      frac = std::ldexp(static_cast<long double>(top), -64) +
             std::ldexp(static_cast<long double>(low), -shift);
    } else {
      frac = std::ldexp(static_cast<long double>(
                            static_cast<std::uint64_t>(reduced)),
                        -shift);
    }
  } else {
    // |value| < 2^-75: the product is computed directly in extended precision.
    long double f = static_cast<long double>(factor);
    frac = std::fmod(std::abs(static_cast<long double>(value)) * f, 1.0L);
  }
  const long double c = center(frac);
  return static_cast<double>(negative ? -c : c);
}

double centered_phase(const Frequency& theta, std::uint64_t n, int k) {
  long double rational_part = 0.0L;
  if (theta.numerator() != 0) {
    const std::uint64_t q = theta.denominator();
    const std::uint64_t nk = pow_mod_u64(n, k, q);
    const auto r = static_cast<std::uint64_t>(
        u128(static_cast<std::uint64_t>(theta.numerator())) * nk % q);
    // Centered integer residue, so negation maps r -> -r exactly.
    const auto centered = (2 * r >= q) ? static_cast<std::int64_t>(r) -
                                             static_cast<std::int64_t>(q)
                                       : static_cast<std::int64_t>(r);
    rational_part = static_cast<long double>(centered) /
                    static_cast<long double>(q);
  }
  long double offset_part = 0.0L;
  if (theta.offset() != 0.0) {
    offset_part = centered_frac_product(theta.offset(), wrapping_pow(n, k));
  }
  return static_cast<double>(center(rational_part + offset_part));
}

std::complex<double> unit_root(std::uint64_t num, std::uint64_t den) {
  num %= den;
  if (num == 0) return {1.0, 0.0};
  if (8 * num % den == 0) {
    const std::uint64_t eighth = 8 * num / den;
    constexpr double h = 0.70710678118654752440;
    switch (eighth) {
      case 1: return {h, h};
      case 2: return {0.0, 1.0};
      case 3: return {-h, h};
      case 4: return {-1.0, 0.0};
      case 5: return {-h, -h};
      case 6: return {0.0, -1.0};
      case 7: return {h, -h};
      default: break;
    }
  }
  return e_of(static_cast<double>(static_cast<long double>(num) /
                                  static_cast<long double>(den)));
}

}  // namespace friable
