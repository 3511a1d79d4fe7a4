#include "friable/recurrence.hpp"

#include <algorithm>
#include <cmath>

#include "friable/errors.hpp"
#include "friable/weyl.hpp"

namespace friable {

RecurrenceCensus census(std::uint64_t N, const SmoothWindow& w, int k,
                        const Frequency& theta, double eps) {
  if (!(eps > 0 && eps < 0.5)) throw DomainError("census: eps must lie in (0, 1/2)");
  if (k < 1) throw DomainError("census: k must be >= 1");
  if (N > kMaxInteger - 1) throw DomainError("census: N too large");
  struct Tally {
    std::uint64_t total = 0;
    std::uint64_t hits = 0;
    std::vector<std::uint64_t> sample;
  };
  const auto parts = map_segments(1, N + 1, [&](const FactorTable& t) {
    Tally tally;
    for (std::uint64_t n = t.lo(); n < t.hi(); ++n) {
      if (!t.is_smooth(n, w)) continue;
      ++tally.total;
      if (distance_to_integer(theta, n, k) <= eps) {
        ++tally.hits;
        if (tally.sample.size() < RecurrenceCensus::kSampleSize) {
          tally.sample.push_back(n);
        }
      }
    }
    return tally;
  });
  RecurrenceCensus out;
  out.theta = theta;
  out.k = k;
  out.eps = eps;
  out.N = N;
  for (const Tally& t : parts) {
    out.total += t.total;
    out.hits += t.hits;
    for (const auto n : t.sample) {
      if (out.sample.size() < RecurrenceCensus::kSampleSize) out.sample.push_back(n);
    }
  }
  out.fraction = out.total == 0 ? 0.0
                                : static_cast<double>(out.hits) /
                                      static_cast<double>(out.total);
  return out;
}

RecoveredDenominator recover_q(const RecurrenceCensus& c, std::uint64_t q_max,
                               std::uint64_t x_scale,
                               const Constants& constants) {
  if (q_max < 1) throw DomainError("recover_q: q_max must be >= 1");
  if (c.hits == 0) throw DomainError("recover_q: census has no hits");
  RecoveredDenominator out;
  out.err = distance_to_integer(c.theta, 1, 1);
  const std::uint64_t scan = std::min<std::uint64_t>(q_max, 10000);
  for (std::uint64_t q = 2; q <= scan && out.err > 0; ++q) {
    const double e = distance_to_integer(c.theta, q, 1);
    if (e < out.err) {
      out.q = q;
      out.err = e;
    }
  }
  if (q_max > scan) {
    for (const RationalApprox& r : convergents(c.theta, q_max)) {
      if (r.err < out.err) {
        out.q = r.q;
        out.err = r.err;
      }
    }
  }
  out.threshold = constants.recurrence_scale * c.eps *
                  std::pow(c.fraction, -constants.recurrence_kappa) /
                  std::pow(static_cast<double>(x_scale), c.k);
  out.certified = out.err <= out.threshold;
  return out;
}

BootstrapReport bootstrap_audit(const Frequency& theta, int k, std::uint64_t N,
                                const SmoothWindow& w, std::uint64_t L,
                                double eps_prime, double delta,
                                const Constants& constants) {
  if (k < 1) throw DomainError("bootstrap_audit: k must be >= 1");
  if (L < 1 || L > N) throw DomainError("bootstrap_audit: need 1 <= L <= N");
  if (!(eps_prime > 0 && eps_prime < 1) || !(delta > 0 && delta < 1)) {
    throw DomainError("bootstrap_audit: eps' and delta must lie in (0, 1)");
  }
  if (N > kMaxInteger / 2 - 1) throw DomainError("bootstrap_audit: N too large");
  if (N + 1 > memory_budget_bytes() / sizeof(std::uint32_t)) {
    throw CapacityError("bootstrap_audit: prefix counts exceed the memory budget");
  }
  BootstrapReport r;
  // prefix[i] = #(A cap [N, N + i)).
  std::vector<std::uint32_t> prefix(N + 2, 0);
  std::uint32_t running = 0;
  for_each_segment(N, 2 * N + 1, [&](const FactorTable& t) {
    for (std::uint64_t m = t.lo(); m < t.hi(); ++m) {
      if (t.is_smooth(m, w)) {
        ++running;
        if (distance_to_integer(theta, m, k) <= eps_prime) ++r.hits;
      }
      prefix[m - N + 1] = running;
    }
  });
  r.set_size = running;
  if (r.set_size == 0) throw DomainError("bootstrap_audit: A is empty");

  // Lengths L 2^j up to N + 1, evenly spaced starts, at least 100 intervals.
  std::vector<std::uint64_t> lengths;
  for (std::uint64_t len = L; len <= N + 1; len *= 2) {
    lengths.push_back(len);
    if (len > (N + 1) / 2) break;
  }
  const std::uint64_t per_length =
      std::max<std::uint64_t>(8, (100 + lengths.size() - 1) / lengths.size());
  const auto A = static_cast<double>(r.set_size);
  const auto X = static_cast<double>(N);
  double worst = 1.0;
  for (const std::uint64_t len : lengths) {
    const std::uint64_t span = N + 1 - len;  // starts in [0, span]
    for (std::uint64_t i = 0; i < per_length; ++i) {
      const std::uint64_t s =
          per_length == 1 ? 0
                          : static_cast<std::uint64_t>(
                                static_cast<unsigned __int128>(span) * i /
                                (per_length - 1));
      const double count = prefix[s + len] - prefix[s];
      worst = std::max(worst, count * X / (A * static_cast<double>(len)));
      ++r.intervals;
    }
  }
  r.delta_obs = worst;

  r.theta_abs = std::abs(centered_phase(theta, 1, 1));
  r.hypothesis_bound =
      eps_prime / (static_cast<double>(L) * std::pow(X, k - 1));
  r.hypothesis_ok = r.theta_abs <= r.hypothesis_bound &&
                    static_cast<double>(r.hits) >= delta * A;
  r.small_threshold = constants.bootstrap_small * delta / r.delta_obs;
  r.large_threshold = constants.bootstrap_large * r.delta_obs * eps_prime /
                      (delta * std::pow(X, k));
  if (r.hypothesis_ok) {
    r.branch_small = eps_prime >= r.small_threshold;
    r.branch_large = r.theta_abs <= r.large_threshold;
  }
  return r;
}

}  // namespace friable
