#pragma once

// Weighted indicators of smooth numbers and the W-trick.
//
//   g(n) = n / (alpha(n, y) Psi(n, [y', y]))       for n in S([y', y])
//   h(n) = N^alpha / Psi(N, [y', y]) * n^(1-alpha) / alpha   on [N, 2N]
//
// Both have mean roughly 1 over dyadic blocks.

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>

#include "friable/compensated.hpp"
#include "friable/saddle.hpp"
#include "friable/sieve.hpp"

namespace friable {

// Membership of a single n by trial division (n <= 10^14).
bool in_window(std::uint64_t n, const SmoothWindow& w);

// alpha(n, y) memoized on buckets floor(64 log n); each bucket uses the saddle
// point at its logarithmic midpoint. Thread-safe.
class AlphaCache {
 public:
  explicit AlphaCache(double y) : y_(y) {}

  double y() const { return y_; }
  double operator()(std::uint64_t n) const;

  static std::int64_t bucket(std::uint64_t n);

 private:
  double y_;
  mutable std::mutex mutex_;
  mutable std::map<std::int64_t, double> values_;
};

// g at a single n, with the exact alpha(n, y) and an exact Psi(n, [y', y]).
// Linear in n; use for_each_weight_g for ranges.
double weight_g(std::uint64_t n, const SmoothWindow& w);

// Calls fn(n, g(n)) for every smooth n in [lo, hi), ascending, with alpha
// taken from the bucket cache and Psi(n) maintained as a running count.
template <typename Fn>
void for_each_weight_g(std::uint64_t lo, std::uint64_t hi,
                       const SmoothWindow& w, const AlphaCache& alpha,
                       Fn&& fn) {
  if (lo < 1) lo = 1;
  if (lo >= hi) return;
  std::uint64_t count = psi(lo - 1, w);
  for_each_smooth(lo, hi, w, [&](std::uint64_t n) {
    ++count;
    fn(n, static_cast<double>(n) /
              (alpha(n) * static_cast<double>(count)));
  });
}

// h on the dyadic window [N, 2N].
class WeightH {
 public:
  WeightH(std::uint64_t anchor, const SmoothWindow& w);

  std::uint64_t anchor() const { return anchor_; }
  const SmoothWindow& window() const { return window_; }
  double alpha() const { return alpha_; }
  std::uint64_t psi_anchor() const { return psi_anchor_; }

  // h(n) assuming n is smooth; throws DomainError outside [N, 2N].
  double smooth_value(std::uint64_t n) const;
  // h(n) including the indicator.
  double operator()(std::uint64_t n) const;

 private:
  std::uint64_t anchor_;
  SmoothWindow window_;
  double alpha_;
  std::uint64_t psi_anchor_;
  double log_scale_;  // log(N^alpha / (alpha Psi(N)))
};

double weight_h(std::uint64_t n, std::uint64_t anchor, const SmoothWindow& w);

struct WTrick {
  std::uint64_t n_scale = 0;
  double w_of_n = 0;
  std::uint64_t W = 1;
  std::uint64_t q_extra = 1;
  std::uint64_t A = 0;
  bool inclusive = false;  // W = prod_{p <= w} instead of p < w

  // W~ = W q, the modulus actually used.
  std::uint64_t modulus() const { return W * q_extra; }
  // phi(W~) / W~.
  double density() const;
};

struct WTrickOptions {
  std::optional<double> w_override;
  bool inclusive = false;
};

// w(N) = log log log N / 2 unless overridden; A is the least residue >= a_seed
// coprime to W. Throws HypothesisError if q_extra has a prime factor that is
// not below w (or not <= w in inclusive mode), DomainError for N < e^e^e
// without an override, CapacityError if W overflows.
WTrick build_wtrick(std::uint64_t n_scale, std::uint64_t a_seed,
                    std::uint64_t q_extra, const WTrickOptions& options = {});

// (phi(Q) / Q) fn(Q m + A) with Q = W~.
double tricked(const std::function<double(std::uint64_t)>& fn,
               const WTrick& wt, std::uint64_t m);

// C-infinity plateau: 1 on |t| <= 1/2, 0 on |t| >= 1, exp(-1/t) glue.
class BumpFunction {
 public:
  double operator()(double t) const;
};

// log y' (sum_{d | n} mu(d) chi(log d / log y'))^2. Requires y_lo > 1 and
// n <= 10^9.
double gpy_majorant(std::uint64_t n, double y_lo,
                    const BumpFunction& chi = {});

// P(y') / phi(P(y')) if gcd(n, P(y')) = 1, else 0, with P(y') = prod_{p < y'}.
double cramer_model(std::uint64_t n, double y_lo);

}  // namespace friable
