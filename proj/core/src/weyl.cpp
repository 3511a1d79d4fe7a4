#include "friable/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "friable/compensated.hpp"
#include "friable/errors.hpp"
#include "friable/saddle.hpp"

namespace friable {

namespace {

struct Fraction {
  std::int64_t p;
  std::uint64_t q;
};

// Convergents p_n/q_n and partial quotients a_{n+1} of theta, stopping once
// q_n exceeds q_max (the last convergent kept has q_n <= q_max).
struct Expansion {
  std::vector<Fraction> convergents;
  std::vector<std::uint64_t> next_quotient;  // a_{n+1}, 0 when terminated
};

Expansion expand(const Frequency& theta, std::uint64_t q_max) {
  Expansion out;
  const bool exact = theta.offset() == 0.0;
  // Exact: theta = num/den, Euclid on (num, den). Otherwise long double.
  std::uint64_t num = static_cast<std::uint64_t>(theta.numerator());
  std::uint64_t den = theta.denominator();
  long double t = theta.approx();

  long double a0l = std::floor(t);
  std::int64_t a0 = exact ? static_cast<std::int64_t>(num / den)
                          : static_cast<std::int64_t>(a0l);
  std::int64_t p_prev = 1, p = a0;
  std::uint64_t q_prev = 0, q = 1;
  long double frac = t - a0l;
  if (exact) num %= den;
  out.convergents.push_back({p, q});
  for (int iter = 0; iter < 200; ++iter) {
    std::uint64_t a = 0;
    if (exact) {
      if (num == 0) break;
      a = den / num;
      const std::uint64_t rem = den % num;
      den = num;
      num = rem;
    } else {
      if (frac <= 0 || !std::isfinite(frac)) break;
      const long double inv = 1.0L / frac;
      if (inv > 1e18L) break;
      const long double fl = std::floor(inv);
      a = static_cast<std::uint64_t>(fl);
      frac = inv - fl;
    }
    out.next_quotient.push_back(a);
    const unsigned __int128 q_next =
        static_cast<unsigned __int128>(a) * q + q_prev;
    if (q_next > q_max) break;
    const std::int64_t p_next = static_cast<std::int64_t>(a) * p + p_prev;
    p_prev = p;
    p = p_next;
    q_prev = q;
    q = static_cast<std::uint64_t>(q_next);
    out.convergents.push_back({p, q});
  }
  if (out.next_quotient.size() < out.convergents.size()) {
    out.next_quotient.push_back(0);
  }
  return out;
}

RationalApprox approx_at(const Frequency& theta, std::uint64_t q) {
  RationalApprox r;
  r.q = q;
  const double phase = centered_phase(theta, q, 1);
  r.err = std::abs(phase);
  // a = q theta - phase, recovered in integer arithmetic from the parts.
  const long double qt = static_cast<long double>(q) * theta.approx();
  r.a = static_cast<std::int64_t>(std::llround(qt - phase));
  return r;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

}  // namespace

double RationalApprox::quality(double x, int k) const {
  return static_cast<double>(q) + std::pow(x, k) * err;
}

std::complex<double> weyl_sum(std::uint64_t x, const SmoothWindow& w, int k,
                              const Frequency& theta) {
  if (k < 1) throw DomainError("weyl_sum: k must be >= 1");
  if (x > kMaxInteger - 1) throw DomainError("weyl_sum: x too large");
  const bool zero = theta.numerator() == 0 && theta.offset() == 0.0;
  auto parts = map_segments(1, x + 1, [&](const FactorTable& t) {
    ComplexSum s;
    for (std::uint64_t n = t.lo(); n < t.hi(); ++n) {
      if (!t.is_smooth(n, w)) continue;
      s += zero ? std::complex<double>(1.0, 0.0)
                : e_of(centered_phase(theta, n, k));
    }
    return s;
  });
  ComplexSum total;
  for (const auto& s : parts) total.merge(s);
  return total.value();
}

std::complex<double> weyl_sum_by_residues(std::uint64_t x,
                                          const SmoothWindow& w, int k,
                                          std::int64_t a, std::uint64_t q) {
  if (q == 0) throw DomainError("weyl_sum_by_residues: q must be >= 1");
  const auto counts = psi_residues(x, w, q);
  const auto ar = static_cast<std::uint64_t>(
      ((a % static_cast<std::int64_t>(q)) + static_cast<std::int64_t>(q)) %
      static_cast<std::int64_t>(q));
  ComplexSum total;
  for (std::uint64_t r = 0; r < q; ++r) {
    if (counts[r] == 0) continue;
    const std::uint64_t num =
        static_cast<std::uint64_t>(u128(ar) * pow_mod_u64(r, k, q) % q);
    total += unit_root(num, q) * static_cast<double>(counts[r]);
  }
  return total.value();
}

std::vector<RationalApprox> convergents(const Frequency& theta,
                                        std::uint64_t q_max) {
  if (q_max < 1) throw DomainError("convergents: q_max must be >= 1");
  std::vector<RationalApprox> out;
  for (const Fraction& f : expand(theta, q_max).convergents) {
    RationalApprox r = approx_at(theta, f.q);
    if (!out.empty() && out.back().q == r.q) {
      if (r.err < out.back().err) out.back() = r;
      continue;
    }
    out.push_back(r);
  }
  return out;
}

RationalApprox dirichlet_approx(const Frequency& theta, std::uint64_t q_max) {
  return convergents(theta, q_max).back();
}

MajorArc major_arc_member(const Frequency& theta, double Q, double x, int k) {
  if (!(Q >= 1)) throw DomainError("major_arc_member: Q must be >= 1");
  if (k < 1) throw DomainError("major_arc_member: k must be >= 1");
  MajorArc out;
  out.radius = Q * std::pow(x, -k);
  const auto q_max = static_cast<std::uint64_t>(
      std::min<double>(std::floor(Q), 1e18));
  // theta mod 1 in [0, 1).
  long double t = theta.approx();
  t -= std::floor(t);
  std::optional<RationalApprox> best;
  const auto consider = [&](std::uint64_t q) {
    if (q == 0 || q > q_max) return;
    const double phase = centered_phase(theta, q, 1);
    const long double qt = static_cast<long double>(q) * t;
    // Integer nearest to q t, then the admissible neighbours in [0, q).
    const auto nearest = static_cast<std::int64_t>(std::llround(qt - phase));
    for (std::int64_t a : {nearest, nearest - 1, nearest + 1}) {
      if (a < 0 || static_cast<std::uint64_t>(a) >= q) continue;
      if (gcd_u64(static_cast<std::uint64_t>(a), q) != 1) continue;
      const double dist =
          a == nearest ? std::abs(phase)
                       : static_cast<double>(std::abs(
                             qt - static_cast<long double>(a)));
      if (!best || dist < best->err ||
          (dist == best->err && q < best->q)) {
        best = RationalApprox{a, q, dist};
      }
    }
  };
  const Expansion e = expand(theta, q_max);
  for (std::size_t i = 0; i < e.convergents.size(); ++i) {
    const std::uint64_t q = e.convergents[i].q;
    consider(q);
    // Intermediate fractions between this convergent and the next.
    const std::uint64_t q_prev = i == 0 ? 0 : e.convergents[i - 1].q;
    const std::uint64_t a_next = e.next_quotient[i];
    if (q == 0) continue;
    const std::uint64_t j_cap =
        a_next == 0 ? (q_max - q_prev) / q : std::min(a_next, (q_max - q_prev) / q);
    // The distance falls monotonically in j; check the last two in range
    // (one of them may be the excluded fraction 1/1) and the first.
    for (std::uint64_t j : {std::uint64_t{1}, j_cap > 0 ? j_cap - 1 : 0, j_cap}) {
      if (j >= 1 && j <= j_cap) consider(q_prev + j * q);
    }
  }
  consider(1);
  consider(q_max);
  if (best) {
    out.witness = *best;
    out.member = best->err <= out.radius;
  }
  return out;
}

namespace {

FactorTriple triple_from_descending(std::uint64_t n, std::uint64_t M,
                                    const std::vector<std::uint64_t>& desc) {
  FactorTriple t;
  t.n = n;
  std::uint64_t v = 1;
  for (const std::uint64_t p : desc) {
    v *= p;
    t.p = p;
    if (v > M) break;
  }
  t.v = v;
  t.u = n / v;
  return t;
}

void require_triple_input(std::uint64_t n, std::uint64_t M,
                          const std::vector<std::uint64_t>& desc,
                          const SmoothWindow& w) {
  if (n <= M) throw DomainError("factor_triple: n must exceed M");
  const bool smooth =
      desc.empty() ? true : w.admits(desc.back(), desc.front());
  if (!smooth) throw DomainError("factor_triple: n is not in S([y', y])");
}

}  // namespace

FactorTriple factor_triple(std::uint64_t n, std::uint64_t M,
                           const SmoothWindow& w) {
  if (n == 0) throw DomainError("factor_triple: n must be >= 1");
  std::vector<std::uint64_t> desc = n > 1 ? factorize(n) : std::vector<std::uint64_t>{};
  std::reverse(desc.begin(), desc.end());
  require_triple_input(n, M, desc, w);
  return triple_from_descending(n, M, desc);
}

FactorTriple factor_triple(std::uint64_t n, std::uint64_t M,
                           const SmoothWindow& w, const FactorTable& table) {
  if (n == 0) throw DomainError("factor_triple: n must be >= 1");
  if (table.lo() > 2 || !table.contains(n)) {
    throw DomainError("factor_triple: table must cover [2, n]");
  }
  std::vector<std::uint64_t> desc;
  for (std::uint64_t m = n; m > 1; m /= desc.back()) {
    desc.push_back(table.largest_factor(m));
  }
  require_triple_input(n, M, desc, w);
  return triple_from_descending(n, M, desc);
}

bool triple_is_valid(const FactorTriple& t, std::uint64_t M,
                     const SmoothWindow& w) {
  if (t.p < 2 || t.v == 0 || t.u == 0) return false;
  if (static_cast<unsigned __int128>(t.u) * t.v != t.n) return false;
  if (t.v % t.p != 0) return false;
  if (!(t.v > M) ||
      static_cast<unsigned __int128>(t.v) > static_cast<unsigned __int128>(M) * t.p) {
    return false;
  }
  const auto fv = factorize(t.v);
  if (fv.front() != t.p || !w.admits(fv.front(), fv.back())) return false;
  if (t.u > 1) {
    const auto fu = factorize(t.u);
    if (fu.back() > t.p || !w.admits(fu.front(), fu.back())) return false;
  }
  return true;
}

DichotomyReport dichotomy_report(std::uint64_t x, const SmoothWindow& w, int k,
                                 const Frequency& theta, const Constants& c) {
  DichotomyReport r;
  const auto X = static_cast<double>(x);
  if (x < 3) throw DomainError("dichotomy_report: x must exceed 2");
  r.sum = weyl_sum(x, w, k, theta);
  r.psi = psi(x, w);
  r.ratio = r.psi == 0 ? 0.0 : std::abs(r.sum) / static_cast<double>(r.psi);
  r.alpha = solve_alpha(X, std::max(2.0, w.y_hi())).alpha;
  r.arc = major_arc_member(theta, std::pow(X, 1.0 / 12), X, k);
  const auto q_cap = static_cast<std::uint64_t>(std::floor(std::pow(X, 0.1)));
  bool first = true;
  for (const RationalApprox& cand : convergents(theta, std::max<std::uint64_t>(q_cap, 1))) {
    const double quality = cand.quality(X, k);
    if (first || quality < r.quality) {
      r.witness = cand;
      r.quality = quality;
      first = false;
    }
  }
  r.decay = c.weyl_decay;
  const double log_x = std::log(X);
  r.envelope_major =
      std::pow(r.quality, -c.weyl_decay + 2.0 * (1.0 - r.alpha)) *
      std::pow(log_x, 5.0);
  r.envelope_minor =
      r.psi == 0 ? 0.0 : std::pow(X, 1.0 - c.weyl_decay) / static_cast<double>(r.psi);
  r.branch = r.arc.member ? "major" : "minor";
  const double k_regime = std::max(2.0 * c.k_prime, 2.0);
  r.regime_ok = w.y_lo() <= std::pow(log_x, c.k_prime) &&
                std::pow(log_x, k_regime) < w.y_hi() &&
                w.y_hi() <= std::pow(X, 1.0 / (4.0 * k));
  return r;
}

}  // namespace friable
