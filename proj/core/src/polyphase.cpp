#include "friable/polyphase.hpp"

#include <cmath>
#include <sstream>

#include "friable/compensated.hpp"
#include "friable/errors.hpp"

namespace friable {

namespace {

using boost::multiprecision::cpp_int;

// T(i, j) = j! S(i, j), the number of surjections from i onto j points.
std::vector<std::vector<cpp_int>> surjections(int d) {
  std::vector<std::vector<cpp_int>> t(d + 1, std::vector<cpp_int>(d + 1, 0));
  t[0][0] = 1;
  for (int i = 1; i <= d; ++i) {
    for (int j = 1; j <= i; ++j) t[i][j] = j * (t[i - 1][j] + t[i - 1][j - 1]);
  }
  return t;
}

// Signed Stirling numbers of the first kind s(j, i).
std::vector<std::vector<cpp_int>> stirling_first(int d) {
  std::vector<std::vector<cpp_int>> s(d + 1, std::vector<cpp_int>(d + 1, 0));
  s[0][0] = 1;
  for (int j = 1; j <= d; ++j) {
    for (int i = 1; i <= j; ++i) s[j][i] = s[j - 1][i - 1] - (j - 1) * s[j - 1][i];
  }
  return s;
}

void require_degree(std::size_t size) {
  if (size == 0) throw DomainError("polynomial needs at least one coefficient");
  if (size > kMaxPolyDegree + 1) throw DomainError("polynomial degree exceeds 30");
}

Rational parse_rational(const std::string& token) {
  const auto slash = token.find('/');
  try {
    if (slash != std::string::npos) {
      const cpp_int num(token.substr(0, slash));
      const cpp_int den(token.substr(slash + 1));
      if (den == 0) throw DomainError("zero denominator in '" + token + "'");
      return Rational(num, den);
    }
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size() || !std::isfinite(v)) throw std::invalid_argument(token);
    return exact_rational(v);
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception&) {
    throw DomainError("cannot parse coefficient '" + token + "'");
  }
}

Frequency as_frequency(const Rational& r) {
  const cpp_int num = boost::multiprecision::numerator(r);
  const cpp_int den = boost::multiprecision::denominator(r);
  if (den <= cpp_int(kMaxInteger)) {
    return Frequency::rational(static_cast<std::int64_t>(num),
                               static_cast<std::uint64_t>(den));
  }
  // Large denominators: nearest double.
  return Frequency::real(static_cast<double>(r));
}

}  // namespace

Rational frac(const Rational& r) {
  const cpp_int num = boost::multiprecision::numerator(r);
  const cpp_int den = boost::multiprecision::denominator(r);
  cpp_int rem = num % den;
  if (rem < 0) rem += den;
  return Rational(rem, den);
}

Rational exact_rational(double value) {
  if (!std::isfinite(value)) throw DomainError("non-finite coefficient");
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  const auto m = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r(m);
  if (exponent >= 0) return r * Rational(cpp_int(1) << exponent);
  return r / Rational(cpp_int(1) << -exponent);
}

double distance_to_integer(const Rational& r) {
  const Rational f = frac(r);
  const Rational d = f > Rational(1, 2) ? Rational(1) - f : f;
  return static_cast<double>(d);
}

std::vector<Rational> monomial_to_binomial(const std::vector<Rational>& beta) {
  require_degree(beta.size());
  const int d = static_cast<int>(beta.size()) - 1;
  const auto t = surjections(d);
  std::vector<Rational> alpha(beta.size());
  for (int j = 0; j <= d; ++j) {
    Rational sum = 0;
    for (int i = j; i <= d; ++i) sum += beta[i] * Rational(t[i][j]);
    alpha[j] = frac(sum);
  }
  return alpha;
}

std::vector<Rational> binomial_to_monomial(const std::vector<Rational>& alpha) {
  require_degree(alpha.size());
  const int d = static_cast<int>(alpha.size()) - 1;
  const auto s = stirling_first(d);
  std::vector<Rational> beta(alpha.size());
  cpp_int factorial = 1;
  std::vector<cpp_int> fact(d + 1);
  for (int j = 0; j <= d; ++j) {
    if (j > 0) factorial *= j;
    fact[j] = factorial;
  }
  for (int i = 0; i <= d; ++i) {
    Rational sum = 0;
    for (int j = i; j <= d; ++j) sum += alpha[j] * Rational(s[j][i], fact[j]);
    beta[i] = frac(sum);
  }
  return beta;
}

PolyMod1::PolyMod1(std::vector<Rational> beta) : beta_(std::move(beta)) {
  require_degree(beta_.size());
  for (auto& b : beta_) b = frac(b);
  alpha_ = monomial_to_binomial(beta_);
  for (const auto& b : beta_) terms_.push_back(as_frequency(b));
}

PolyMod1 PolyMod1::from_monomial(const std::vector<Rational>& beta) {
  return PolyMod1(beta);
}

PolyMod1 PolyMod1::from_monomial(const std::vector<double>& beta) {
  std::vector<Rational> exact;
  for (const double b : beta) exact.push_back(exact_rational(b));
  return PolyMod1(std::move(exact));
}

PolyMod1 PolyMod1::from_binomial(const std::vector<Rational>& alpha) {
  PolyMod1 p(binomial_to_monomial(alpha));
  return p;
}

PolyMod1 PolyMod1::parse(const std::string& text) {
  std::vector<Rational> beta;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    const auto b = token.find_first_not_of(" \t");
    const auto e = token.find_last_not_of(" \t");
    if (b == std::string::npos) throw DomainError("empty coefficient in '" + text + "'");
    beta.push_back(parse_rational(token.substr(b, e - b + 1)));
  }
  return PolyMod1(std::move(beta));
}

Rational PolyMod1::eval_exact(std::int64_t n) const {
  Rational sum = 0;
  Rational power = 1;
  for (const auto& b : beta_) {
    sum += b * power;
    power *= n;
  }
  return frac(sum);
}

double PolyMod1::phase(std::uint64_t n) const {
  long double sum = 0;
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    const Frequency& f = terms_[j];
    if (f.numerator() == 0 && f.offset() == 0.0) continue;
    sum += j == 0 ? static_cast<long double>(
                        centered_phase(f, 1, 1))
                  : static_cast<long double>(
                        centered_phase(f, n, static_cast<int>(j)));
  }
  sum -= std::floor(sum + 0.5L);
  return static_cast<double>(sum);
}

std::string PolyMod1::describe() const {
  std::ostringstream out;
  for (std::size_t j = 0; j < beta_.size(); ++j) {
    if (j) out << ",";
    out << beta_[j].str();
  }
  return out.str();
}

double smoothness_norm(const PolyMod1& p, std::uint64_t N) {
  double best = 0;
  const auto& alpha = p.alpha();
  for (int j = 1; j <= p.degree(); ++j) {
    best = std::max(best, std::pow(static_cast<double>(N), j) *
                              distance_to_integer(alpha[j]));
  }
  return best;
}

namespace {

std::uint64_t correlation_length(std::uint64_t N, const WTrick& wt) {
  const std::uint64_t Q = wt.modulus();
  return N >= wt.A ? (N - wt.A) / Q : 0;
}

// sum_{m = 1}^{M} e(P(m)).
ComplexSum phase_total(std::uint64_t M, const PolyMod1& p) {
  ComplexSum s;
  for (std::uint64_t m = 1; m <= M; ++m) s += e_of(p.phase(m));
  return s;
}

}  // namespace

std::complex<double> phase_correlation(std::uint64_t N, const SmoothWindow& w,
                                       const WTrick& wt, const PolyMod1& p) {
  if (N < 2) throw DomainError("phase_correlation: N must be >= 2");
  const std::uint64_t Q = wt.modulus();
  const std::uint64_t M = correlation_length(N, wt);
  const double density = wt.density();
  ComplexSum weighted;
  if (M > 0) {
    const AlphaCache alpha(std::max(2.0, w.y_hi()));
    for_each_weight_g(Q + wt.A, Q * M + wt.A + 1, w, alpha,
                      [&](std::uint64_t n, double g) {
                        if (n % Q != wt.A % Q) return;
                        const std::uint64_t m = (n - wt.A) / Q;
                        weighted += density * g * e_of(p.phase(m));
                      });
  }
  const ComplexSum ones = phase_total(M, p);
  const std::complex<double> diff = weighted.value() - ones.value();
  return diff * (static_cast<double>(Q) / static_cast<double>(N));
}

std::complex<double> cramer_phase_correlation(std::uint64_t N, double y_lo,
                                              const WTrick& wt,
                                              const PolyMod1& p) {
  if (N < 2) throw DomainError("cramer_phase_correlation: N must be >= 2");
  const std::uint64_t Q = wt.modulus();
  const std::uint64_t M = correlation_length(N, wt);
  const double density = wt.density();
  const PrimeList small = primes_below(y_lo);
  double ratio = 1.0;
  for (const auto q : small) ratio *= static_cast<double>(q) / static_cast<double>(q - 1);
  ComplexSum s;
  for (std::uint64_t m = 1; m <= M; ++m) {
    const std::uint64_t n = Q * m + wt.A;
    bool coprime = true;
    for (const auto q : small) {
      if (n % q == 0) {
        coprime = false;
        break;
      }
    }
    const double weight = density * (coprime ? ratio : 0.0) - 1.0;
    if (weight != 0.0) s += weight * e_of(p.phase(m));
  }
  return s.value() * (static_cast<double>(Q) / static_cast<double>(N));
}

}  // namespace friable
