#include "friable/weights.hpp"

#include <cmath>
#include <numbers>

#include "friable/errors.hpp"

namespace friable {

bool in_window(std::uint64_t n, const SmoothWindow& w) {
  if (n == 0) return false;
  if (n == 1) return true;
  const auto f = factorize(n);
  return w.admits(f.front(), f.back());
}

std::int64_t AlphaCache::bucket(std::uint64_t n) {
  return static_cast<std::int64_t>(
      std::floor(64.0 * std::log(static_cast<double>(n))));
}

double AlphaCache::operator()(std::uint64_t n) const {
  const std::int64_t b = bucket(n);
  {
    std::lock_guard lock(mutex_);
    const auto it = values_.find(b);
    if (it != values_.end()) return it->second;
  }
  const double x = std::exp((static_cast<double>(b) + 0.5) / 64.0);
  const double a = solve_alpha(x, y_).alpha;
  std::lock_guard lock(mutex_);
  values_.emplace(b, a);
  return a;
}

double weight_g(std::uint64_t n, const SmoothWindow& w) {
  if (n < 2) throw DomainError("weight_g: n must be >= 2");
  if (!in_window(n, w)) return 0.0;
  const double a = solve_alpha(static_cast<double>(n), w.y_hi()).alpha;
  return static_cast<double>(n) / (a * static_cast<double>(psi(n, w)));
}

WeightH::WeightH(std::uint64_t anchor, const SmoothWindow& w)
    : anchor_(anchor), window_(w) {
  if (anchor < 2) throw DomainError("weight_h: anchor must be >= 2");
  if (anchor > kMaxInteger / 2) throw DomainError("weight_h: anchor too large");
  alpha_ = solve_alpha(static_cast<double>(anchor), w.y_hi()).alpha;
  psi_anchor_ = psi(anchor, w);
  log_scale_ = alpha_ * std::log(static_cast<double>(anchor)) -
               std::log(static_cast<double>(psi_anchor_)) - std::log(alpha_);
}

double WeightH::smooth_value(std::uint64_t n) const {
  if (n < anchor_ || n > 2 * anchor_) {
    throw DomainError("weight_h: n must lie in [N, 2N]");
  }
  return std::exp(log_scale_ +
                  (1.0 - alpha_) * std::log(static_cast<double>(n)));
}

double WeightH::operator()(std::uint64_t n) const {
  const double v = smooth_value(n);
  return in_window(n, window_) ? v : 0.0;
}

double weight_h(std::uint64_t n, std::uint64_t anchor, const SmoothWindow& w) {
  return WeightH(anchor, w)(n);
}

double WTrick::density() const {
  const std::uint64_t q = modulus();
  return static_cast<double>(euler_phi(q)) / static_cast<double>(q);
}

namespace {

bool below_w(std::uint64_t p, double w, bool inclusive) {
  const auto d = static_cast<double>(p);
  return inclusive ? d <= w : d < w;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

}  // namespace

WTrick build_wtrick(std::uint64_t n_scale, std::uint64_t a_seed,
                    std::uint64_t q_extra, const WTrickOptions& options) {
  WTrick wt;
  wt.n_scale = n_scale;
  wt.inclusive = options.inclusive;
  if (q_extra == 0) throw DomainError("build_wtrick: q_extra must be >= 1");
  if (options.w_override) {
    if (!std::isfinite(*options.w_override)) {
      throw DomainError("build_wtrick: w override must be finite");
    }
    wt.w_of_n = *options.w_override;
  } else {
    const double threshold = std::exp(std::exp(std::numbers::e));
    if (!(static_cast<double>(n_scale) >= threshold)) {
      throw DomainError("build_wtrick: N must be >= e^e^e without a w override");
    }
    wt.w_of_n =
        0.5 * std::log(std::log(std::log(static_cast<double>(n_scale))));
  }
  unsigned __int128 W = 1;
  if (wt.w_of_n >= 2) {
    const auto limit = static_cast<std::uint64_t>(std::floor(wt.w_of_n));
    for (const std::uint64_t p : primes_up_to(limit)) {
      if (!below_w(p, wt.w_of_n, wt.inclusive)) break;
      W *= p;
      if (W > kMaxInteger) throw CapacityError("build_wtrick: W exceeds 2^63 - 1");
    }
  }
  wt.W = static_cast<std::uint64_t>(W);
  if (q_extra > 1) {
    for (const std::uint64_t p : factorize(q_extra)) {
      if (!below_w(p, wt.w_of_n, wt.inclusive)) {
        throw HypothesisError("build_wtrick: q_extra has a prime factor >= w(N)");
      }
    }
  }
  wt.q_extra = q_extra;
  if (static_cast<unsigned __int128>(wt.W) * q_extra > kMaxInteger) {
    throw CapacityError("build_wtrick: W q exceeds 2^63 - 1");
  }
  std::uint64_t a = a_seed;
  while (gcd_u64(a, wt.W) != 1) ++a;
  if (a > wt.modulus()) {
    throw DomainError("build_wtrick: no admissible A in [a_seed, W q]");
  }
  wt.A = a;
  return wt;
}

double tricked(const std::function<double(std::uint64_t)>& fn,
               const WTrick& wt, std::uint64_t m) {
  const unsigned __int128 n =
      static_cast<unsigned __int128>(wt.modulus()) * m + wt.A;
  if (n > kMaxInteger) throw DomainError("tricked: Qm + A exceeds 2^63 - 1");
  return wt.density() * fn(static_cast<std::uint64_t>(n));
}

double BumpFunction::operator()(double t) const {
  const auto glue = [](double s) { return s > 0 ? std::exp(-1.0 / s) : 0.0; };
  const double s = 2.0 * (1.0 - std::abs(t));
  if (s >= 1.0) return 1.0;
  if (s <= 0.0) return 0.0;
  const double a = glue(s);
  return a / (a + glue(1.0 - s));
}

double gpy_majorant(std::uint64_t n, double y_lo, const BumpFunction& chi) {
  if (!(y_lo > 1)) throw DomainError("gpy_majorant: y' must exceed 1");
  if (n == 0) throw DomainError("gpy_majorant: n must be >= 1");
  if (n > 1000000000ULL) throw CapacityError("gpy_majorant: n exceeds 10^9");
  const double log_y = std::log(y_lo);
  std::vector<std::uint64_t> distinct;
  if (n > 1) {
    for (const std::uint64_t p : factorize(n)) {
      if (distinct.empty() || distinct.back() != p) distinct.push_back(p);
    }
  }
  // Squarefree divisors d with chi(log d / log y') possibly nonzero: d < y'.
  CompensatedSum<double> sum;
  const std::function<void(std::size_t, std::uint64_t, int)> walk =
      [&](std::size_t i, std::uint64_t d, int sign) {
        if (i == distinct.size()) {
          sum += sign * chi(std::log(static_cast<double>(d)) / log_y);
          return;
        }
        walk(i + 1, d, sign);
        const std::uint64_t next = d * distinct[i];
        if (static_cast<double>(next) < y_lo) walk(i + 1, next, -sign);
      };
  walk(0, 1, 1);
  const double s = sum.value();
  return log_y * s * s;
}

double cramer_model(std::uint64_t n, double y_lo) {
  double ratio = 1.0;
  for (const std::uint64_t p : primes_below(y_lo)) {
    if (n % p == 0) return 0.0;
    ratio *= static_cast<double>(p) / static_cast<double>(p - 1);
  }
  return ratio;
}

}  // namespace friable
