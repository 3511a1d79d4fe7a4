#pragma once

// Saddle point alpha(x, y) of sigma -> x^sigma zeta(sigma, y), truncated Euler
// products, and the closed-form estimates for Psi(x, y) and Psi(x, [y', y])
// built from them.

#include <cstdint>
#include <span>

#include "friable/constants.hpp"
#include "friable/sieve.hpp"

namespace friable {

struct SaddleContext {
  double x = 0;
  double y = 0;
  double alpha = 1;
  double zeta_alpha_y = 1;      // zeta(alpha, y); may be +inf for tiny alpha
  double log_zeta_alpha_y = 0;  // always finite
  double u = 0;                 // log x / log y
  // sum_{p <= y} log p / (p^alpha - 1) - log x at the returned alpha.
  double residual = 0;
  // The stationarity equation has no root in (0, 1] (x too small relative
  // to y); alpha is reported as 1.
  bool clamped = false;
  int iterations = 0;
};

// log prod_{p <= y} (1 - p^-sigma)^-1, summed with compensation.
double log_truncated_zeta(double sigma, double y);
double truncated_zeta(double sigma, double y);

// g_m(sigma) = prod_{p | m} (1 - p^-sigma) for the given primes.
double restricted_euler(std::span<const std::uint64_t> primes, double sigma);
// The canonical case m = P(y') = prod_{p < y'} p.
double restricted_euler_below(double y_lo, double sigma);

// sum_{p <= y} log p / (p^sigma - 1).
double saddle_sum(double sigma, double y);

// Solves sum_{p <= y} log p / (p^sigma - 1) = log x: bisection on
// [1e-6, 1] with safeguarded Newton steps. Requires x > 1, y >= 2.
SaddleContext solve_alpha(double x, double y, double tolerance = 1e-12);

// 1 - log(u log(u + 1)) / log y.
double alpha_main_term(double x, double y);

// x^alpha zeta(alpha, y) / (alpha sqrt(2 pi log x log y)).
double ht_estimate(const SaddleContext& ctx);
double log_ht_estimate(const SaddleContext& ctx);

struct BrtEstimate {
  double value = 0;              // g_{P(y')}(alpha) * ht_estimate
  double restricted_factor = 1;  // g_{P(y')}(alpha)
  double ht = 0;
  // y' <= (log x)^K' and (log x)^max(2K', 1) < y <= x.
  bool regime_ok = false;
  SaddleContext ctx;
};

BrtEstimate brt_estimate(double x, const SmoothWindow& w,
                         const Constants& constants = {});

// d^-alpha(x, y) * baseline, the predicted Psi(x/d, [y', y]). The baseline is
// the caller's choice of exact or estimated Psi(x, [y', y]).
// Throws DomainError unless 1 <= d <= x / y.
double dilation_prediction(double x, const SmoothWindow& w, double d,
                           double baseline);

enum class ProductRegime { near_one, small_sigma };

const char* to_string(ProductRegime regime);

// Envelope for zeta(sigma, y) in log space, following the two branches of
// the classical estimate: near sigma = 1 it is of order log y; for smaller
// sigma it is (1 - sigma)^-1 exp(y^(1-sigma) / ((1-sigma) log y) (1 + err)).
struct ProductEnvelope {
  double log_lower = 0;
  double log_upper = 0;
  double log_main = 0;
  ProductRegime regime = ProductRegime::near_one;

  bool contains_log(double log_value) const {
    return log_lower <= log_value && log_value <= log_upper;
  }
};

// Throws DomainError when sigma < 2 / log y or sigma > 1.
ProductEnvelope mv_product_bounds(double sigma, double y,
                                  const Constants& constants = {});

}  // namespace friable
