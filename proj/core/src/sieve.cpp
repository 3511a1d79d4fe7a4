#include "friable/sieve.hpp"

#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <string>

#include "friable/compensated.hpp"
#include "friable/phase.hpp"

namespace friable {

namespace {

std::uint64_t env_or(const char* name, std::uint64_t fallback) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const double value = std::strtod(raw, &end);
  if (end == raw || value <= 0) return fallback;
  return static_cast<std::uint64_t>(value);
}

std::uint64_t floor_to_integer(double v) {
  if (!(v >= 0)) return 0;
  if (v >= static_cast<double>(kMaxInteger)) return kMaxInteger;
  return static_cast<std::uint64_t>(std::floor(v));
}

std::uint64_t ceil_to_integer(double v) {
  if (!(v >= 0)) return 0;
  if (v >= static_cast<double>(kMaxInteger)) return kMaxInteger;
  return static_cast<std::uint64_t>(std::ceil(v));
}

// Segmented Eratosthenes producing every prime <= limit.
std::vector<std::uint64_t> generate_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  const std::uint64_t root = isqrt(limit);
  std::vector<std::uint8_t> small(root + 1, 1);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
  }
  if (limit > 1000) {
    const double estimate = 1.3 * static_cast<double>(limit) /
                            std::log(static_cast<double>(limit));
    primes.reserve(static_cast<std::size_t>(estimate));
  }
  constexpr std::uint64_t kBlock = std::uint64_t{1} << 20;
  std::vector<std::uint8_t> block(kBlock);
  for (std::uint64_t lo = 2; lo <= limit; lo += kBlock) {
    const std::uint64_t hi = std::min(lo + kBlock - 1, limit);
    std::fill(block.begin(), block.end(), 1);
    for (const std::uint64_t p : base) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
      for (std::uint64_t m = start; m <= hi; m += p) block[m - lo] = 0;
    }
    for (std::uint64_t n = lo; n <= hi; ++n) {
      if (block[n - lo]) primes.push_back(n);
    }
  }
  return primes;
}

}  // namespace

SmoothWindow::SmoothWindow(double y_lo, double y_hi) : y_lo_(y_lo), y_hi_(y_hi) {
  if (!(y_lo >= 1.0) || !std::isfinite(y_lo)) {
    throw DomainError("smooth window: y_lo must be a finite real >= 1, got " +
                      std::to_string(y_lo));
  }
  if (!(y_hi >= y_lo)) {
    throw DomainError("smooth window: y_hi must be >= y_lo");
  }
  min_prime_ = std::max<std::uint64_t>(2, ceil_to_integer(y_lo));
  max_prime_ = floor_to_integer(y_hi);
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

PrimeList primes_up_to(std::uint64_t limit) {
  static std::mutex mutex;
  static std::shared_ptr<const std::vector<std::uint64_t>> cache;
  static std::uint64_t cached_limit = 0;

  std::shared_ptr<const std::vector<std::uint64_t>> data;
  {
    std::lock_guard lock(mutex);
    if (!cache || cached_limit < limit) {
      // Grow geometrically so repeated slightly larger requests stay cheap.
      const std::uint64_t target =
          std::max<std::uint64_t>(limit, std::min<std::uint64_t>(
                                             2 * cached_limit, limit * 2));
      cache = std::make_shared<const std::vector<std::uint64_t>>(
          generate_primes(std::max<std::uint64_t>(target, 1024)));
      cached_limit = std::max<std::uint64_t>(target, 1024);
    }
    data = cache;
  }
  const auto count = static_cast<std::size_t>(
      std::upper_bound(data->begin(), data->end(), limit) - data->begin());
  return {std::move(data), count};
}

PrimeList primes_below(double bound) {
  if (!(bound > 2.0)) return primes_up_to(0);
  const double c = std::ceil(bound);
  return primes_up_to(static_cast<std::uint64_t>(c) - 1);
}

std::uint64_t memory_budget_bytes() {
  static const std::uint64_t budget =
      env_or("FRIABLE_MEMORY_BUDGET", std::uint64_t{1} << 30);
  return budget;
}

std::uint64_t segment_length() {
  static const std::uint64_t length =
      std::max<std::uint64_t>(1024, env_or("FRIABLE_SEGMENT_LENGTH",
                                           kDefaultSegmentLength));
  return length;
}

unsigned worker_threads() {
  static const unsigned threads = [] {
    const auto hw = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(env_or("FRIABLE_THREADS", hw));
  }();
  return threads;
}

FactorTable build_factor_table(std::uint64_t lo, std::uint64_t hi) {
  if (lo >= hi) throw DomainError("factor table: empty range");
  if (hi - 1 > kMaxInteger) {
    throw DomainError("factor table: range exceeds 2^63 - 1");
  }
  constexpr std::uint64_t kBytesPerEntry =
      sizeof(std::uint64_t) + 2 * sizeof(std::uint32_t);
  const std::uint64_t length = hi - lo;
  if (length > memory_budget_bytes() / kBytesPerEntry) {
    throw CapacityError("factor table: " + std::to_string(length) +
                        " entries exceed the memory budget of " +
                        std::to_string(memory_budget_bytes()) +
                        " bytes (FRIABLE_MEMORY_BUDGET)");
  }

  FactorTable table;
  table.lo_ = lo;
  table.hi_ = hi;
  table.primes_ = primes_up_to(isqrt(hi - 1));
  table.lpf_.resize(length);
  table.small_spf_.assign(length, 0);
  std::vector<std::uint32_t> last(length, 0);

  for (std::uint64_t i = 0; i < length; ++i) table.lpf_[i] = lo + i;

  for (const std::uint64_t p : table.primes_) {
    std::uint64_t first = ((lo + p - 1) / p) * p;
    if (first == 0) first = p;
    const auto p32 = static_cast<std::uint32_t>(p);
    for (std::uint64_t m = first; m < hi; m += p) {
      const std::uint64_t i = m - lo;
      std::uint64_t rem = table.lpf_[i];
      do {
        rem /= p;
      } while (rem % p == 0);
      table.lpf_[i] = rem;
      if (table.small_spf_[i] == 0) table.small_spf_[i] = p32;
      last[i] = p32;
    }
  }

  for (std::uint64_t i = 0; i < length; ++i) {
    const std::uint64_t rem = table.lpf_[i];
    if (rem > 1) continue;  // leftover cofactor is the largest prime
    if (last[i] != 0) {
      table.lpf_[i] = last[i];
    } else {
      table.lpf_[i] = lo + i;  // 0 or 1
    }
  }
  return table;
}

std::uint64_t psi_between(std::uint64_t lo, std::uint64_t hi,
                          const SmoothWindow& w) {
  if (hi > kMaxInteger) throw DomainError("psi: x exceeds 2^63 - 1");
  if (hi <= lo) return 0;
  const auto parts = map_segments(lo + 1, hi + 1, [&](const FactorTable& t) {
    std::uint64_t count = 0;
    for (std::uint64_t n = t.lo(); n < t.hi(); ++n) count += t.is_smooth(n, w);
    return count;
  });
  std::uint64_t total = 0;
  for (const auto c : parts) total += c;
  return total;
}

std::uint64_t psi(std::uint64_t x, const SmoothWindow& w) {
  return psi_between(0, x, w);
}

std::vector<std::uint64_t> psi_residues(std::uint64_t x, const SmoothWindow& w,
                                        std::uint64_t q) {
  if (q == 0) throw DomainError("psi_residues: modulus must be >= 1");
  if (x > kMaxInteger) throw DomainError("psi: x exceeds 2^63 - 1");
  std::vector<std::uint64_t> counts(q, 0);
  if (x == 0) return counts;
  const auto parts = map_segments(1, x + 1, [&](const FactorTable& t) {
    std::vector<std::uint64_t> local(q, 0);
    std::uint64_t r = t.lo() % q;
    for (std::uint64_t n = t.lo(); n < t.hi(); ++n) {
      if (t.is_smooth(n, w)) ++local[r];
      if (++r == q) r = 0;
    }
    return local;
  });
  for (const auto& part : parts) {
    for (std::uint64_t r = 0; r < q; ++r) counts[r] += part[r];
  }
  return counts;
}

std::uint64_t psi_progression(std::uint64_t x, const SmoothWindow& w,
                              std::uint64_t q, std::uint64_t a) {
  if (q == 0 || a >= q) {
    throw DomainError("psi_progression: need q >= 1 and 0 <= a < q");
  }
  if (q == 1) return psi(x, w);
  if (x > kMaxInteger) throw DomainError("psi: x exceeds 2^63 - 1");
  if (x == 0) return 0;
  const auto parts = map_segments(1, x + 1, [&](const FactorTable& t) {
    std::uint64_t count = 0;
    std::uint64_t first = t.lo() + (a + q - t.lo() % q) % q;
    for (std::uint64_t n = first; n < t.hi(); n += q) count += t.is_smooth(n, w);
    return count;
  });
  std::uint64_t total = 0;
  for (const auto c : parts) total += c;
  return total;
}

// ---------------------------------------------------------------------------
// Dirichlet characters

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

// A cyclic factor of (Z/qZ)^*: a generator (as a residue mod q) and its order.
struct CyclicFactor {
  std::uint64_t generator;
  std::uint64_t order;
};

// Lifts g mod m (m | q, gcd(m, q/m) = 1) to the residue mod q that is g mod m
// and 1 mod q/m.
std::uint64_t crt_embed(std::uint64_t g, std::uint64_t m, std::uint64_t q) {
  const std::uint64_t rest = q / m;
  for (std::uint64_t t = 0; t < m; ++t) {
    const std::uint64_t candidate = 1 + t * rest;
    if (candidate % m == g % m) return candidate % q;
  }
  return 1;
}

std::vector<CyclicFactor> unit_group_factors(std::uint64_t q) {
  std::vector<CyclicFactor> factors;
  std::uint64_t rest = q;
  for (std::uint64_t p = 2; p * p <= rest || rest > 1; ++p) {
    if (p * p > rest) p = rest;
    if (rest % p != 0) continue;
    std::uint64_t pe = 1;
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      pe *= p;
      ++e;
    }
    if (p == 2) {
      if (e == 2) factors.push_back({crt_embed(3, pe, q), 2});
      if (e >= 3) {
        factors.push_back({crt_embed(pe - 1, pe, q), 2});
        factors.push_back({crt_embed(5, pe, q), pe / 4});
      }
      continue;
    }
    const std::uint64_t order = pe / p * (p - 1);
    // Smallest primitive root mod p^e: a primitive root mod p whose
    // (p-1)-th power is not 1 mod p^2 generates every (Z/p^e)^*.
    std::vector<std::uint64_t> order_primes;
    for (const auto f : factorize(order)) {
      if (order_primes.empty() || order_primes.back() != f) order_primes.push_back(f);
    }
    for (std::uint64_t g = 2; g < pe; ++g) {
      if (g % p == 0) continue;
      bool primitive = true;
      for (const auto f : order_primes) {
        if (pow_mod(g, order / f, pe) == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) {
        factors.push_back({crt_embed(g, pe, q), order});
        break;
      }
    }
  }
  return factors;
}

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
  return a / gcd_u64(a, b) * b;
}

}  // namespace

DirichletCharacter DirichletCharacter::principal(std::uint64_t q) {
  if (q == 0) throw DomainError("character modulus must be >= 1");
  std::vector<std::complex<double>> values(q, 0.0);
  for (std::uint64_t r = 0; r < q; ++r) {
    if (gcd_u64(r, q) == 1) values[r] = 1.0;
  }
  return {q, std::move(values), true};
}

DirichletCharacter DirichletCharacter::legendre(std::uint64_t p) {
  if (p < 3 || p % 2 == 0 || factorize(p).size() != 1) {
    throw DomainError("legendre: modulus must be an odd prime");
  }
  std::vector<std::complex<double>> values(p, 0.0);
  for (std::uint64_t r = 1; r < p; ++r) {
    values[r] = pow_mod(r, (p - 1) / 2, p) == 1 ? 1.0 : -1.0;
  }
  return {p, std::move(values), false};
}

std::vector<DirichletCharacter> DirichletCharacter::all(std::uint64_t q) {
  if (q == 0 || q > 100000) {
    throw DomainError("DirichletCharacter::all: need 1 <= q <= 10^5");
  }
  const auto factors = unit_group_factors(q);
  std::uint64_t exponent = 1;
  for (const auto& f : factors) exponent = lcm_u64(exponent, f.order);

  // Discrete logarithms: for each unit r, the exponent vector w.r.t. factors,
  // folded into a single "angle numerator" per character later.
  const std::size_t t = factors.size();
  std::vector<std::vector<std::uint32_t>> logs(q);
  std::vector<std::uint64_t> idx(t, 0);
  for (;;) {
    std::uint64_t element = 1 % q;
    for (std::size_t i = 0; i < t; ++i) {
      element = mul_mod(element, pow_mod(factors[i].generator, idx[i], q), q);
    }
    logs[element].assign(idx.begin(), idx.end());
    std::size_t i = 0;
    while (i < t && ++idx[i] == factors[i].order) idx[i++] = 0;
    if (i == t) break;
  }

  std::vector<DirichletCharacter> out;
  std::vector<std::uint64_t> label(t, 0);
  for (;;) {
    std::vector<std::complex<double>> values(q, 0.0);
    bool principal = true;
    for (std::uint64_t r = 0; r < q; ++r) {
      if (gcd_u64(r, q) != 1) continue;
      std::uint64_t numerator = 0;
      for (std::size_t i = 0; i < t; ++i) {
        numerator = (numerator + label[i] * logs[r][i] % factors[i].order *
                                     (exponent / factors[i].order)) %
                    exponent;
      }
      values[r] = unit_root(numerator, exponent);
      if (numerator != 0) principal = false;
    }
    out.push_back(DirichletCharacter(q, std::move(values), principal));
    std::size_t i = 0;
    while (i < t && ++label[i] == factors[i].order) label[i++] = 0;
    if (i == t) break;
  }
  return out;
}

std::complex<double> psi_character(std::uint64_t x, const SmoothWindow& w,
                                   const DirichletCharacter& chi) {
  const auto counts = psi_residues(x, w, chi.modulus());
  // Exact integer counts per class, combined once.
  CompensatedSum<double> re;
  CompensatedSum<double> im;
  for (std::uint64_t r = 0; r < counts.size(); ++r) {
    if (counts[r] == 0) continue;
    const auto v = chi.values()[r] * static_cast<double>(counts[r]);
    re.add(v.real());
    im.add(v.imag());
  }
  return {re.value(), im.value()};
}

double von_mangoldt(std::uint64_t n, const FactorTable& table) {
  if (!table.contains(n) || n == 0) {
    throw DomainError("von_mangoldt: n outside the factor table window");
  }
  if (n == 1) return 0.0;
  const auto p = table.smallest_factor(n);
  return p == table.largest_factor(n) ? std::log(static_cast<double>(p)) : 0.0;
}

std::vector<std::uint64_t> factorize(std::uint64_t n) {
  if (n > 100'000'000'000'000ULL) {
    throw CapacityError("factorize: n exceeds 10^14");
  }
  std::vector<std::uint64_t> out;
  if (n < 2) return out;
  for (const std::uint64_t p : primes_up_to(isqrt(n))) {
    if (p * p > n) break;
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) return 0;
  std::uint64_t result = n;
  std::uint64_t previous = 0;
  for (const auto p : factorize(n)) {
    if (p == previous) continue;
    result = result / p * (p - 1);
    previous = p;
  }
  return result;
}

}  // namespace friable
