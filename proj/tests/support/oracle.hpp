#pragma once

// Brute-force references that share no code with the library.

#include <cstdint>
#include <numeric>
#include <utility>

namespace oracle {

// Smallest and largest prime factor by trial division; (1, 1) for n = 1.
inline std::pair<std::uint64_t, std::uint64_t> extreme_factors(std::uint64_t n) {
  std::uint64_t lo = 0, hi = 1;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    while (n % d == 0) {
      if (lo == 0) lo = d;
      hi = d;
      n /= d;
    }
  }
  if (n > 1) {
    if (lo == 0) lo = n;
    hi = n;
  }
  return {lo == 0 ? 1 : lo, hi};
}

inline bool is_smooth(std::uint64_t n, double y_lo, double y_hi) {
  if (n == 1) return true;
  const auto [lo, hi] = extreme_factors(n);
  return static_cast<double>(lo) >= y_lo && static_cast<double>(hi) <= y_hi;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

}  // namespace oracle
