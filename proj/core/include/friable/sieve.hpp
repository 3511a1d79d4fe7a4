#pragma once

// Segmented smallest/largest prime factor sieve and the exact counting
// functions built on it. Everything else in the library treats these counts
// as ground truth.

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdint>
#include <exception>
#include <memory>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "friable/errors.hpp"

namespace friable {

inline constexpr std::uint64_t kMaxInteger = 0x7fffffffffffffffULL;
inline constexpr std::uint64_t kDefaultSegmentLength = std::uint64_t{1} << 22;

// The set S([y_lo, y_hi]) of positive integers all of whose prime factors p
// satisfy y_lo <= p <= y_hi (both ends inclusive). 1 is always a member.
class SmoothWindow {
 public:
  SmoothWindow(double y_lo, double y_hi);

  static SmoothWindow up_to(double y) { return {1.0, y}; }

  double y_lo() const { return y_lo_; }
  double y_hi() const { return y_hi_; }

  // Smallest / largest integer a prime factor may take.
  std::uint64_t min_prime() const { return min_prime_; }
  std::uint64_t max_prime() const { return max_prime_; }

  // Membership given the smallest and largest prime factor of n; n = 1 is
  // passed as (1, 1).
  bool admits(std::uint64_t smallest, std::uint64_t largest) const {
    if (largest <= 1) return largest == 1;
    return smallest >= min_prime_ && largest <= max_prime_;
  }

  bool operator==(const SmoothWindow&) const = default;

 private:
  double y_lo_;
  double y_hi_;
  std::uint64_t min_prime_;
  std::uint64_t max_prime_;
};

// Ascending primes up to some limit. Shares storage with a process-wide cache,
// so copies are cheap and views stay valid for the lifetime of the object.
class PrimeList {
 public:
  PrimeList() = default;
  PrimeList(std::shared_ptr<const std::vector<std::uint64_t>> data,
            std::size_t count)
      : data_(std::move(data)), count_(count) {}

  std::span<const std::uint64_t> view() const {
    return data_ ? std::span<const std::uint64_t>(data_->data(), count_)
                 : std::span<const std::uint64_t>{};
  }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  auto begin() const { return view().begin(); }
  auto end() const { return view().end(); }
  std::uint64_t operator[](std::size_t i) const { return (*data_)[i]; }

 private:
  std::shared_ptr<const std::vector<std::uint64_t>> data_;
  std::size_t count_ = 0;
};

// All primes p <= limit. Thread-safe; results are cached and reused.
PrimeList primes_up_to(std::uint64_t limit);

// Primes p < bound (strict), the factors of P(bound) = prod_{p < bound} p.
PrimeList primes_below(double bound);

std::uint64_t isqrt(std::uint64_t n);

// Memory budget in bytes for a single factor table. Read once from the
// FRIABLE_MEMORY_BUDGET environment variable (default 1 GiB).
std::uint64_t memory_budget_bytes();
// Segment length used by streaming operations (FRIABLE_SEGMENT_LENGTH,
// default 2^22).
std::uint64_t segment_length();
// Worker threads for segment-parallel operations (FRIABLE_THREADS, default
// hardware concurrency).
unsigned worker_threads();

// Smallest and largest prime factor of every n in [lo, hi). By convention
// 1 maps to (1, 1) and 0 to (0, 0).
class FactorTable {
 public:
  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }
  std::uint64_t size() const { return hi_ - lo_; }
  bool contains(std::uint64_t n) const { return n >= lo_ && n < hi_; }

  std::uint64_t smallest_factor(std::uint64_t n) const {
    const auto i = n - lo_;
    return small_spf_[i] != 0 ? small_spf_[i] : lpf_[i];
  }
  std::uint64_t largest_factor(std::uint64_t n) const { return lpf_[n - lo_]; }

  bool is_smooth(std::uint64_t n, const SmoothWindow& w) const {
    return n != 0 && w.admits(smallest_factor(n), largest_factor(n));
  }

  // Primes used for sieving: all p <= sqrt(hi - 1).
  std::span<const std::uint64_t> sieving_primes() const {
    return primes_.view();
  }

 private:
  friend FactorTable build_factor_table(std::uint64_t lo, std::uint64_t hi);

  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
  std::vector<std::uint64_t> lpf_;
  // Smallest prime factor when it is <= sqrt(hi - 1); 0 means n is 0, 1 or
  // a prime, in which case the smallest factor equals lpf_.
  std::vector<std::uint32_t> small_spf_;
  PrimeList primes_;
};

// Throws DomainError for an invalid range and CapacityError when the table
// would exceed memory_budget_bytes().
FactorTable build_factor_table(std::uint64_t lo, std::uint64_t hi);

// Calls fn(const FactorTable&) on consecutive segments covering [lo, hi).
template <typename Fn>
void for_each_segment(std::uint64_t lo, std::uint64_t hi, Fn&& fn,
                      std::uint64_t length = segment_length()) {
  for (std::uint64_t start = lo; start < hi;) {
    const std::uint64_t stop = (hi - start > length) ? start + length : hi;
    const FactorTable table = build_factor_table(start, stop);
    fn(table);
    start = stop;
  }
}

// Maps fn over the segments of [lo, hi) on worker_threads() threads and
// returns the per-segment results in segment order, so reductions over the
// result are deterministic regardless of scheduling.
template <typename Fn>
auto map_segments(std::uint64_t lo, std::uint64_t hi, Fn fn,
                  std::uint64_t length = segment_length())
    -> std::vector<decltype(fn(std::declval<const FactorTable&>()))> {
  using Result = decltype(fn(std::declval<const FactorTable&>()));
  std::vector<std::pair<std::uint64_t, std::uint64_t>> bounds;
  for (std::uint64_t start = lo; start < hi;) {
    const std::uint64_t stop = (hi - start > length) ? start + length : hi;
    bounds.emplace_back(start, stop);
    start = stop;
  }
  std::vector<Result> results(bounds.size());
  const unsigned threads = std::min<std::size_t>(
      std::max(1u, worker_threads()), std::max<std::size_t>(bounds.size(), 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      results[i] = fn(build_factor_table(bounds[i].first, bounds[i].second));
    }
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < bounds.size() && !failed; i = next++) {
      try {
        results[i] = fn(build_factor_table(bounds[i].first, bounds[i].second));
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

// Calls fn(n) for every n in [lo, hi) that lies in S(w), in ascending order.
template <typename Fn>
void for_each_smooth(std::uint64_t lo, std::uint64_t hi, const SmoothWindow& w,
                     Fn&& fn) {
  for_each_segment(lo, hi, [&](const FactorTable& table) {
    for (std::uint64_t n = table.lo(); n < table.hi(); ++n) {
      if (table.is_smooth(n, w)) fn(n);
    }
  });
}

// Psi(x, [y', y]): number of 1 <= n <= x in S([y', y]).
std::uint64_t psi(std::uint64_t x, const SmoothWindow& w);

// Number of smooth n with lo < n <= hi.
std::uint64_t psi_between(std::uint64_t lo, std::uint64_t hi,
                          const SmoothWindow& w);

// Counts of smooth n <= x in each residue class mod q (index = residue).
std::vector<std::uint64_t> psi_residues(std::uint64_t x, const SmoothWindow& w,
                                        std::uint64_t q);

std::uint64_t psi_progression(std::uint64_t x, const SmoothWindow& w,
                              std::uint64_t q, std::uint64_t a);

// A Dirichlet character, stored as its table of values on residues mod q.
class DirichletCharacter {
 public:
  static DirichletCharacter principal(std::uint64_t q);
  // The quadratic character (n/p) for an odd prime p.
  static DirichletCharacter legendre(std::uint64_t p);
  // Every character mod q, principal first, in a fixed order. q <= 10^5.
  static std::vector<DirichletCharacter> all(std::uint64_t q);

  std::uint64_t modulus() const { return q_; }
  bool is_principal() const { return principal_; }
  std::complex<double> operator()(std::uint64_t n) const {
    return values_[n % q_];
  }
  std::span<const std::complex<double>> values() const { return values_; }

 private:
  DirichletCharacter(std::uint64_t q, std::vector<std::complex<double>> values,
                     bool principal)
      : q_(q), values_(std::move(values)), principal_(principal) {}

  std::uint64_t q_;
  std::vector<std::complex<double>> values_;
  bool principal_;
};

// Psi(x, [y', y]; chi) = sum over smooth n <= x of chi(n).
std::complex<double> psi_character(std::uint64_t x, const SmoothWindow& w,
                                   const DirichletCharacter& chi);

// log p if n = p^k (k >= 1), 0 otherwise. n must lie in the table.
double von_mangoldt(std::uint64_t n, const FactorTable& table);

// Prime factorization of n with multiplicity, ascending. Trial division by
// primes up to sqrt(n); n <= 10^14.
std::vector<std::uint64_t> factorize(std::uint64_t n);

std::uint64_t euler_phi(std::uint64_t n);

}  // namespace friable
