#pragma once

// Strong recurrence of n^k theta over smooth n: how often ||n^k theta|| <= eps,
// which small denominator explains it, and the bootstrapping disjunction.

#include <cstdint>
#include <vector>

#include "friable/constants.hpp"
#include "friable/phase.hpp"
#include "friable/sieve.hpp"

namespace friable {

struct RecurrenceCensus {
  Frequency theta;
  int k = 1;
  double eps = 0;
  std::uint64_t N = 0;
  std::uint64_t total = 0;  // Psi(N, [y', y])
  std::uint64_t hits = 0;   // ||n^k theta|| <= eps (closed)
  double fraction = 0;
  std::vector<std::uint64_t> sample;  // the first hits, ascending

  static constexpr std::size_t kSampleSize = 16;
};

// Throws DomainError unless 0 < eps < 1/2 and k >= 1.
RecurrenceCensus census(std::uint64_t N, const SmoothWindow& w, int k,
                        const Frequency& theta, double eps);

struct RecoveredDenominator {
  std::uint64_t q = 1;
  double err = 0;        // ||q theta||
  double threshold = 0;  // C eps delta^-kappa / x^k
  bool certified = false;
};

// The smallest q <= q_max minimizing ||q theta||: exhaustive below 10^4,
// continued-fraction convergents above. Throws DomainError if q_max < 1 or
// the census has no hits.
RecoveredDenominator recover_q(const RecurrenceCensus& c, std::uint64_t q_max,
                               std::uint64_t x_scale,
                               const Constants& constants = {});

struct BootstrapReport {
  std::uint64_t set_size = 0;  // |A|, A = S cap [N, 2N]
  std::uint64_t hits = 0;      // m in A with ||m^k theta|| <= eps'
  double delta_obs = 1;        // max sampled |A cap P| N / (|A| |P|), >= 1
  std::size_t intervals = 0;   // number of sampled intervals
  double theta_abs = 0;        // |theta| for the centered representative
  double hypothesis_bound = 0; // eps' / (L N^(k-1))
  bool hypothesis_ok = false;
  bool branch_small = false;   // eps' >= c delta / Delta
  bool branch_large = false;   // |theta| <= C Delta eps' / (delta N^k)
  double small_threshold = 0;
  double large_threshold = 0;
};

// Throws DomainError unless 1 <= L <= N, eps', delta in (0, 1) and A is
// nonempty.
BootstrapReport bootstrap_audit(const Frequency& theta, int k, std::uint64_t N,
                                const SmoothWindow& w, std::uint64_t L,
                                double eps_prime, double delta,
                                const Constants& constants = {});

}  // namespace friable
