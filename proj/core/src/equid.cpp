#include "friable/equid.hpp"

#include <cmath>
#include <numeric>

#include "friable/compensated.hpp"
#include "friable/errors.hpp"
#include "friable/saddle.hpp"
#include "friable/weights.hpp"

namespace friable {

namespace {

double log2_of(double x) { return std::log(std::log(x)); }
double log3_of(double x) { return std::log(std::log(std::log(x))); }

void require_modulus(std::uint64_t q, const SmoothWindow& w) {
  if (q == 0) throw DomainError("modulus must be >= 1");
  if (q == 1) return;
  for (const std::uint64_t p : factorize(q)) {
    if (!(static_cast<double>(p) < w.y_lo())) {
      throw HypothesisError("every prime factor of q must be below y'");
    }
  }
}

std::uint64_t count_in_progression(const SmoothWindow& w, const Progression& p,
                                   std::uint64_t lo, std::uint64_t hi) {
  std::uint64_t count = 0;
  if (p.length == 0) return 0;
  for_each_segment(p.start, p.last() + 1, [&](const FactorTable& t) {
    // First progression element at or after t.lo().
    std::uint64_t n = p.start;
    if (t.lo() > p.start) {
      const std::uint64_t offset = t.lo() - p.start;
      n = p.start + (offset + p.step - 1) / p.step * p.step;
    }
    for (; n < t.hi(); n += p.step) {
      if (n >= lo && n <= hi && t.is_smooth(n, w)) ++count;
    }
  });
  return count;
}

}  // namespace

EquidReport make_report(double observed, double predicted, bool regime_ok,
                        Params params) {
  EquidReport r;
  r.observed = observed;
  r.predicted = predicted;
  r.abs_err = std::abs(observed - predicted);
  r.rel_err = r.abs_err / std::max(std::abs(predicted), 1e-300);
  r.regime_ok = regime_ok;
  r.params = std::move(params);
  return r;
}

bool smooth_regime(double x, const SmoothWindow& w, const Constants& c) {
  if (!(x > std::exp(1.0))) return false;
  const double log_x = std::log(x);
  const double k = std::max(2.0, 2.0 * c.k_prime);
  return w.y_lo() <= std::pow(log_x, c.k_prime) &&
         std::pow(log_x, k) < w.y_hi() && w.y_hi() <= x;
}

EquidReport short_progression_sum(std::uint64_t anchor, std::uint64_t n0,
                                  std::uint64_t n1, const SmoothWindow& w,
                                  std::uint64_t q, std::uint64_t a,
                                  const Constants& c) {
  if (anchor < 3) throw DomainError("anchor N must exceed 2");
  if (n0 < anchor || n0 > 2 * anchor || n1 > 2 * anchor - n0) {
    throw DomainError("need N <= N0 and N0 + N1 <= 2N");
  }
  require_modulus(q, w);
  if (a >= q || std::gcd(a, q) != 1) {
    throw DomainError("residue a must satisfy 0 <= a < q, gcd(a, q) = 1");
  }
  const WeightH h(anchor, w);
  CompensatedSum<double> sum;
  if (n1 > 0) {
    for_each_smooth(n0 + 1, n0 + n1 + 1, w, [&](std::uint64_t n) {
      if (n % q == a) sum += h.smooth_value(n);
    });
  }
  const auto N = static_cast<double>(anchor);
  const auto phi = static_cast<double>(euler_phi(q));
  const double N1 = static_cast<double>(n1);
  const bool long_enough =
      N1 >= N * std::exp(-std::pow(std::log(N), 0.25) / 4.0);
  bool regime = smooth_regime(N, w, c) && long_enough;
  if (q > 1) regime = regime && static_cast<double>(q) <=
                                    std::pow(std::log(N), c.k_modulus);
  EquidReport r = make_report(sum.value(), N1 / phi, regime,
                              {{"N", N},
                               {"N0", static_cast<double>(n0)},
                               {"N1", N1},
                               {"y_lo", w.y_lo()},
                               {"y_hi", w.y_hi()},
                               {"q", static_cast<double>(q)},
                               {"a", static_cast<double>(a)}});
  const double l2 = log2_of(N);
  const double l3 = log3_of(N);
  r.extra["alpha"] = h.alpha();
  r.extra["psi_anchor"] = static_cast<double>(h.psi_anchor());
  r.extra["err_relative_term"] = N1 / phi * l3 / l2;
  r.extra["err_short_term"] = N / (phi * std::pow(std::log(N), 1.0 / 24));
  if (q > 1) r.extra["err_progression_term"] = N / std::pow(std::log(N), 0.2);
  return r;
}

EquidReport short_interval_sum(std::uint64_t anchor, std::uint64_t n0,
                               std::uint64_t n1, const SmoothWindow& w,
                               const Constants& c) {
  return short_progression_sum(anchor, n0, n1, w, 1, 0, c);
}

ProgressionReport progression_equid(std::uint64_t x, const SmoothWindow& w,
                                    std::uint64_t q, const Constants& c) {
  require_modulus(q, w);
  ProgressionReport r;
  r.x = x;
  r.q = q;
  const auto counts = psi_residues(x, w, q);
  for (const auto v : counts) r.psi_total += v;
  const auto phi = static_cast<double>(euler_phi(q));
  for (std::uint64_t a = 0; a < q; ++a) {
    if (std::gcd(a, q) != 1) continue;
    ResidueRow row;
    row.a = a;
    row.count = counts[a];
    row.deviation = r.psi_total == 0
                        ? 0.0
                        : std::abs(phi * static_cast<double>(counts[a]) /
                                       static_cast<double>(r.psi_total) -
                                   1.0);
    r.max_deviation = std::max(r.max_deviation, row.deviation);
    r.rows.push_back(row);
  }
  const auto X = static_cast<double>(x);
  r.regime_ok = smooth_regime(X, w, c) &&
                static_cast<double>(q) <= std::pow(std::log(X), c.k_modulus);
  r.params = {{"x", X},
              {"y_lo", w.y_lo()},
              {"y_hi", w.y_hi()},
              {"q", static_cast<double>(q)}};
  return r;
}

CountBoundReport short_interval_count_bound(std::uint64_t x,
                                            const SmoothWindow& w,
                                            const Progression& p,
                                            const Constants& c) {
  if (x < 3) throw DomainError("x must exceed 2");
  if (p.length == 0 || p.step == 0) throw DomainError("progression must be nonempty");
  if (p.start < x || p.last() > 2 * x) throw DomainError("progression must lie in [x, 2x]");
  CountBoundReport r;
  r.observed = count_in_progression(w, p, x, 2 * x);
  const auto X = static_cast<double>(x);
  const auto len = static_cast<double>(p.length);
  const SaddleContext ctx = solve_alpha(X, w.y_hi());
  const auto psi_x = static_cast<double>(psi(x, w));
  r.bound = std::pow(X / len, 1.0 - ctx.alpha) * psi_x * len / X * std::log(X);
  r.constant = c.count_bound;
  r.ratio = static_cast<double>(r.observed) / r.bound;
  r.within = static_cast<double>(r.observed) <= r.constant * r.bound;
  r.regime_ok = smooth_regime(X, w, c);
  r.params = {{"x", X},
              {"y_lo", w.y_lo()},
              {"y_hi", w.y_hi()},
              {"start", static_cast<double>(p.start)},
              {"length", len},
              {"step", static_cast<double>(p.step)},
              {"alpha", ctx.alpha},
              {"psi_x", psi_x}};
  return r;
}

CountBoundReport progression_count_bound(std::uint64_t anchor,
                                         const SmoothWindow& w,
                                         const Progression& p, double ell,
                                         const Constants& c) {
  if (anchor < 16) throw DomainError("anchor N must be >= 16");
  if (p.length == 0 || p.step == 0) throw DomainError("progression must be nonempty");
  CountBoundReport r;
  r.observed = count_in_progression(w, p, anchor, 2 * anchor);
  const auto N = static_cast<double>(anchor);
  const auto len = static_cast<double>(p.length);
  const double delta = log3_of(N) + std::pow(std::log(N), ell - 1.0 / 24);
  const auto psi_2n = static_cast<double>(psi(2 * anchor, w));
  r.bound = delta * psi_2n * len / N;
  r.constant = c.count_bound;
  r.ratio = static_cast<double>(r.observed) / r.bound;
  r.within = static_cast<double>(r.observed) <= r.constant * r.bound;
  r.regime_ok = smooth_regime(N, w, c) && len >= N / std::pow(std::log(N), ell);
  r.params = {{"N", N},
              {"y_lo", w.y_lo()},
              {"y_hi", w.y_hi()},
              {"start", static_cast<double>(p.start)},
              {"length", len},
              {"step", static_cast<double>(p.step)},
              {"ell", ell},
              {"delta", delta}};
  return r;
}

EquidReport character_sum_smallness(std::uint64_t x, const SmoothWindow& w,
                                    const DirichletCharacter& chi,
                                    const Constants& c) {
  if (chi.is_principal()) {
    throw DomainError("character_sum_smallness needs a non-principal character");
  }
  if (x < 3) throw DomainError("x must exceed 2");
  const auto total = static_cast<double>(psi(x, w));
  const double twisted = std::abs(psi_character(x, w, chi));
  const auto X = static_cast<double>(x);
  const double envelope = std::pow(std::log(X), -0.2);
  const auto q = static_cast<double>(chi.modulus());
  bool regime = smooth_regime(X, w, c) &&
                q <= std::pow(std::log(X), c.k_modulus);
  if (regime && chi.modulus() > 1) {
    for (const std::uint64_t p : factorize(chi.modulus())) {
      if (!(static_cast<double>(p) < w.y_lo())) regime = false;
    }
  }
  EquidReport r = make_report(total == 0 ? 0.0 : twisted / total, envelope,
                              regime,
                              {{"x", X},
                               {"y_lo", w.y_lo()},
                               {"y_hi", w.y_hi()},
                               {"q", q}});
  r.extra["ratio_to_envelope"] = r.observed / envelope;
  r.extra["psi"] = total;
  r.extra["abs_twisted"] = twisted;
  return r;
}

}  // namespace friable
