#pragma once

// Desk-scale checks of equidistribution of smooth numbers in short intervals,
// short progressions and residue classes, and of small character sums.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "friable/constants.hpp"
#include "friable/sieve.hpp"

namespace friable {

using Params = std::map<std::string, double>;

struct EquidReport {
  double observed = 0;
  double predicted = 0;
  double abs_err = 0;
  double rel_err = 0;  // abs_err / max(|predicted|, 1e-300)
  bool regime_ok = false;
  Params params;
  // Error envelopes and derived ratios, keyed by name.
  Params extra;
};

EquidReport make_report(double observed, double predicted, bool regime_ok,
                        Params params);

// y' <= (log x)^K', (log x)^max(2, 2K') < y <= x.
bool smooth_regime(double x, const SmoothWindow& w, const Constants& c);

// Sum of h over N0 < n <= N0 + N1 against N1. Requires N <= N0 and
// N0 + N1 <= 2N.
EquidReport short_interval_sum(std::uint64_t anchor, std::uint64_t n0,
                               std::uint64_t n1, const SmoothWindow& w,
                               const Constants& c = {});

// Same sum restricted to m = a (mod q), against N1 / phi(q). With q = 1 it
// performs the identical computation as short_interval_sum.
EquidReport short_progression_sum(std::uint64_t anchor, std::uint64_t n0,
                                  std::uint64_t n1, const SmoothWindow& w,
                                  std::uint64_t q, std::uint64_t a,
                                  const Constants& c = {});

struct ResidueRow {
  std::uint64_t a = 0;
  std::uint64_t count = 0;
  double deviation = 0;  // |phi(q) count / Psi - 1|
};

struct ProgressionReport {
  std::uint64_t x = 0;
  std::uint64_t q = 1;
  std::uint64_t psi_total = 0;
  double max_deviation = 0;
  bool regime_ok = false;
  std::vector<ResidueRow> rows;  // reduced residues only, ascending
  Params params;
};

// Throws HypothesisError unless every prime factor of q is below y'.
ProgressionReport progression_equid(std::uint64_t x, const SmoothWindow& w,
                                    std::uint64_t q, const Constants& c = {});

// The progression {start + i step : 0 <= i < length}.
struct Progression {
  std::uint64_t start = 0;
  std::uint64_t length = 0;
  std::uint64_t step = 1;

  std::uint64_t last() const { return start + (length - 1) * step; }
};

struct CountBoundReport {
  std::uint64_t observed = 0;
  double bound = 0;
  double constant = 0;
  double ratio = 0;  // observed / bound
  bool within = false;  // observed <= constant * bound
  bool regime_ok = false;
  Params params;
};

// #(S cap P) against (x/|P|)^(1-alpha) Psi(x) |P| / x log x, P in [x, 2x].
CountBoundReport short_interval_count_bound(std::uint64_t x,
                                            const SmoothWindow& w,
                                            const Progression& p,
                                            const Constants& c = {});

// #(S cap [N, 2N] cap P) against Delta Psi(2N) |P| / N with
// Delta = log log log N + (log N)^(ell - 1/24); in regime when
// |P| >= N / (log N)^ell.
CountBoundReport progression_count_bound(std::uint64_t anchor,
                                         const SmoothWindow& w,
                                         const Progression& p, double ell,
                                         const Constants& c = {});

// |Psi(x; chi)| / Psi(x) against (log x)^(-1/5). Throws DomainError for a
// principal character.
EquidReport character_sum_smallness(std::uint64_t x, const SmoothWindow& w,
                                    const DirichletCharacter& chi,
                                    const Constants& c = {});

}  // namespace friable
