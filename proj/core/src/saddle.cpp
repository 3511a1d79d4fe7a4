#include "friable/saddle.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "friable/compensated.hpp"
#include "friable/errors.hpp"

namespace friable {

namespace {

void require_sigma(double sigma) {
  if (!(sigma > 0) || !std::isfinite(sigma)) {
    throw DomainError("sigma must be a positive finite real");
  }
}

void require_y(double y) {
  if (!(y >= 2) || !std::isfinite(y)) throw DomainError("y must be >= 2");
}

std::uint64_t prime_limit(double y) {
  const double f = std::floor(y);
  if (f >= static_cast<double>(kMaxInteger)) throw DomainError("y too large");
  return static_cast<std::uint64_t>(f);
}

// -log(1 - p^-sigma), accurate for p^-sigma close to 0 or 1.
double neg_log_factor(std::uint64_t p, double sigma) {
  const double t = -sigma * std::log(static_cast<double>(p));
  return -std::log1p(-std::exp(t));
}

struct SaddleTerms {
  double value = 0;       // sum log p / (p^s - 1)
  double derivative = 0;  // -sum log^2 p * p^s / (p^s - 1)^2
};

SaddleTerms saddle_terms(const PrimeList& primes, double sigma) {
  CompensatedSum<double> value;
  CompensatedSum<double> derivative;
  for (const std::uint64_t p : primes) {
    const double lp = std::log(static_cast<double>(p));
    const double m = std::expm1(sigma * lp);  // p^s - 1
    value += lp / m;
    derivative += -lp * lp * (m + 1) / (m * m);
  }
  return {value.value(), derivative.value()};
}

}  // namespace

double log_truncated_zeta(double sigma, double y) {
  require_sigma(sigma);
  require_y(y);
  CompensatedSum<double> sum;
  for (const std::uint64_t p : primes_up_to(prime_limit(y))) {
    sum += neg_log_factor(p, sigma);
  }
  return sum.value();
}

double truncated_zeta(double sigma, double y) {
  return std::exp(log_truncated_zeta(sigma, y));
}

double restricted_euler(std::span<const std::uint64_t> primes, double sigma) {
  require_sigma(sigma);
  if (primes.empty()) return 1.0;
  CompensatedSum<double> sum;
  for (const std::uint64_t p : primes) sum += -neg_log_factor(p, sigma);
  return std::exp(sum.value());
}

double restricted_euler_below(double y_lo, double sigma) {
  return restricted_euler(primes_below(y_lo).view(), sigma);
}

double saddle_sum(double sigma, double y) {
  require_sigma(sigma);
  require_y(y);
  return saddle_terms(primes_up_to(prime_limit(y)), sigma).value;
}

SaddleContext solve_alpha(double x, double y, double tolerance) {
  if (!(x > 1) || !std::isfinite(x)) throw DomainError("solve_alpha: x must be > 1");
  require_y(y);
  const PrimeList primes = primes_up_to(prime_limit(y));
  const double log_x = std::log(x);

  SaddleContext ctx;
  ctx.x = x;
  ctx.y = y;
  ctx.u = log_x / std::log(y);

  double lo = 1e-6;
  double hi = 1.0;
  SaddleTerms at_hi = saddle_terms(primes, hi);
  double alpha = 1.0;
  if (at_hi.value - log_x >= 0) {
    ctx.clamped = at_hi.value - log_x > 0;
    ctx.residual = at_hi.value - log_x;
  } else {
    // f is decreasing; f(lo) is astronomically large for any y >= 2.
    alpha = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      ctx.iterations = it + 1;
      const SaddleTerms t = saddle_terms(primes, alpha);
      const double f = t.value - log_x;
      if (f > 0) {
        lo = alpha;
      } else if (f < 0) {
        hi = alpha;
      } else {
        break;
      }
      double next = 0.5 * (lo + hi);
      if (std::isfinite(t.derivative) && t.derivative < 0) {
        const double newton = alpha - f / t.derivative;
        if (newton > lo && newton < hi) next = newton;
      }
      const double step = std::abs(next - alpha);
      alpha = next;
      if (step < tolerance || hi - lo < tolerance) break;
    }
    ctx.residual = saddle_terms(primes, alpha).value - log_x;
  }
  ctx.alpha = alpha;
  ctx.log_zeta_alpha_y = log_truncated_zeta(alpha, y);
  ctx.zeta_alpha_y = std::exp(ctx.log_zeta_alpha_y);
  return ctx;
}

double alpha_main_term(double x, double y) {
  require_y(y);
  if (!(x > 1)) throw DomainError("alpha_main_term: x must be > 1");
  const double u = std::log(x) / std::log(y);
  return 1.0 - std::log(u * std::log(u + 1.0)) / std::log(y);
}

double log_ht_estimate(const SaddleContext& ctx) {
  const double log_x = std::log(ctx.x);
  const double log_y = std::log(ctx.y);
  return ctx.alpha * log_x + ctx.log_zeta_alpha_y - std::log(ctx.alpha) -
         0.5 * std::log(2.0 * std::numbers::pi * log_x * log_y);
}

double ht_estimate(const SaddleContext& ctx) {
  return std::exp(log_ht_estimate(ctx));
}

BrtEstimate brt_estimate(double x, const SmoothWindow& w,
                         const Constants& constants) {
  BrtEstimate out;
  out.ctx = solve_alpha(x, w.y_hi());
  out.ht = ht_estimate(out.ctx);
  out.restricted_factor = restricted_euler_below(w.y_lo(), out.ctx.alpha);
  out.value = out.restricted_factor * out.ht;
  const double log_x = std::log(x);
  const double k = constants.k_prime;
  out.regime_ok = w.y_lo() <= std::pow(log_x, k) &&
                  std::pow(log_x, std::max(2.0 * k, 1.0)) < w.y_hi() &&
                  w.y_hi() <= x;
  return out;
}

double dilation_prediction(double x, const SmoothWindow& w, double d,
                           double baseline) {
  if (!(d >= 1) || !(d <= x / w.y_hi())) {
    throw DomainError("dilation_prediction: d must lie in [1, x / y]");
  }
  const SaddleContext ctx = solve_alpha(x, w.y_hi());
  return std::pow(d, -ctx.alpha) * baseline;
}

const char* to_string(ProductRegime regime) {
  return regime == ProductRegime::near_one ? "near-one" : "small-sigma";
}

ProductEnvelope mv_product_bounds(double sigma, double y,
                                  const Constants& constants) {
  require_y(y);
  const double log_y = std::log(y);
  if (!(sigma >= 2.0 / log_y) || !(sigma <= 1.0)) {
    throw DomainError("mv_product_bounds: sigma must lie in [2/log y, 1]");
  }
  ProductEnvelope env;
  if (sigma >= std::max(2.0 / log_y, 1.0 - 4.0 / log_y)) {
    env.regime = ProductRegime::near_one;
    env.log_main = std::log(log_y);
    env.log_lower = std::log(constants.envelope_lower) + env.log_main;
    env.log_upper = std::log(constants.envelope_upper) + env.log_main;
    return env;
  }
  env.regime = ProductRegime::small_sigma;
  const double gap = 1.0 - sigma;
  const double exponent = std::exp(gap * log_y) / (gap * log_y);
  const double error =
      constants.envelope_error * (1.0 / (gap * log_y) + std::exp(-sigma * log_y));
  const double prefactor = -std::log(gap);
  env.log_main = prefactor + exponent;
  env.log_lower = prefactor + exponent * (1.0 - error);
  env.log_upper = prefactor + exponent * (1.0 + error);
  return env;
}

}  // namespace friable
