#include "friable/linsys.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "friable/compensated.hpp"
#include "friable/errors.hpp"
#include "friable/weights.hpp"

namespace friable {

namespace {

using boost::multiprecision::cpp_int;
using i128 = __int128;

cpp_int floor_of(const Rational& r) {
  const cpp_int n = boost::multiprecision::numerator(r);
  const cpp_int d = boost::multiprecision::denominator(r);
  cpp_int q = n / d;
  if (n % d != 0 && n < 0) q -= 1;
  return q;
}

cpp_int ceil_of(const Rational& r) { return -floor_of(-r); }

// Inverse of a square rational matrix; throws if singular.
std::vector<std::vector<Rational>> invert(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && m[pivot][c] == 0) ++pivot;
    if (pivot == n) throw DomainError("degenerate simplex");
    std::swap(m[c], m[pivot]);
    std::swap(inv[c], inv[pivot]);
    const Rational f = m[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      m[c][j] /= f;
      inv[c][j] /= f;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m[i][c] == 0) continue;
      const Rational g = m[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        m[i][j] -= g * m[c][j];
        inv[i][j] -= g * inv[c][j];
      }
    }
  }
  return inv;
}

Rational determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && m[pivot][c] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != c) {
      std::swap(m[c], m[pivot]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      const Rational f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

std::vector<std::vector<Rational>> edge_matrix(const Body& b) {
  // Columns v_i - v_0, stored row-major as m[row][col].
  const int s = b.dimension();
  std::vector<std::vector<Rational>> m(s, std::vector<Rational>(s));
  for (int col = 0; col < s; ++col) {
    for (int row = 0; row < s; ++row) {
      m[row][col] = b.vertices[col + 1][row] - b.vertices[0][row];
    }
  }
  return m;
}

// Integer half-space description of N K for a simplex:
//   (B n)_i >= N c_i for each i, sum_i (B n)_i <= N e.
struct SimplexTest {
  std::vector<std::vector<std::int64_t>> B;
  std::vector<std::int64_t> c;
  std::int64_t e = 0;

  bool contains(const std::vector<std::int64_t>& n, std::int64_t N) const {
    i128 total = 0;
    for (std::size_t i = 0; i < B.size(); ++i) {
      i128 v = 0;
      for (std::size_t j = 0; j < n.size(); ++j) v += i128(B[i][j]) * n[j];
      if (v < i128(N) * c[i]) return false;
      total += v;
    }
    return total <= i128(N) * e;
  }
};

SimplexTest simplex_test(const Body& b) {
  const auto inv = invert(edge_matrix(b));
  const std::size_t s = inv.size();
  std::vector<Rational> c(s, 0);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) c[i] += inv[i][j] * b.vertices[0][j];
  }
  cpp_int D = 1;
  const auto absorb = [&](const Rational& r) {
    D = boost::multiprecision::lcm(D, boost::multiprecision::denominator(r));
  };
  for (const auto& row : inv) for (const auto& v : row) absorb(v);
  for (const auto& v : c) absorb(v);
  const auto to_i64 = [](const Rational& r) {
    if (boost::multiprecision::denominator(r) != 1 ||
        boost::multiprecision::abs(boost::multiprecision::numerator(r)) > cpp_int(1) << 40) {
      throw CapacityError("simplex vertices have denominators that are too large");
    }
    return static_cast<std::int64_t>(boost::multiprecision::numerator(r));
  };
  SimplexTest t;
  Rational sum_c = 0;
  for (std::size_t i = 0; i < s; ++i) {
    std::vector<std::int64_t> row;
    for (std::size_t j = 0; j < s; ++j) row.push_back(to_i64(inv[i][j] * Rational(D)));
    t.B.push_back(row);
    t.c.push_back(to_i64(c[i] * Rational(D)));
    sum_c += c[i];
  }
  t.e = to_i64((Rational(1) + sum_c) * Rational(D));
  return t;
}

std::uint64_t ipow(std::uint64_t b, int e) {
  unsigned __int128 r = 1;
  for (int i = 0; i < e; ++i) {
    r *= b;
    if (r > (unsigned __int128)kMaxInteger) return kMaxInteger;
  }
  return static_cast<std::uint64_t>(r);
}

std::int64_t mod_p(i128 v, std::uint64_t p) {
  auto r = static_cast<std::int64_t>(v % static_cast<i128>(p));
  return r < 0 ? r + static_cast<std::int64_t>(p) : r;
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p) {
  // p prime: a^(p-2).
  std::uint64_t result = 1, base = a % p;
  for (std::uint64_t e = p - 2; e; e >>= 1) {
    if (e & 1) result = static_cast<std::uint64_t>(u128(result) * base % p);
    base = static_cast<std::uint64_t>(u128(base) * base % p);
  }
  return result;
}

// Rank of the system {psi_j(u) = -a_j : j in subset} mod p, or -1 if
// inconsistent.
int subset_rank(const LinearSystem& sys, std::uint32_t subset, std::uint64_t p) {
  std::vector<std::vector<std::uint64_t>> rows;
  for (int j = 0; j < sys.r; ++j) {
    if (!(subset >> j & 1)) continue;
    std::vector<std::uint64_t> row(sys.s + 1);
    for (int i = 0; i < sys.s; ++i) row[i] = mod_p(sys.forms[j][i], p);
    row[sys.s] = mod_p(-static_cast<i128>(sys.shifts[j]), p);
    rows.push_back(std::move(row));
  }
  int rank = 0;
  for (int col = 0; col < sys.s && rank < static_cast<int>(rows.size()); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const std::uint64_t inv = inverse_mod(rows[rank][col], p);
    for (auto& v : rows[rank]) v = static_cast<std::uint64_t>(u128(v) * inv % p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == static_cast<std::size_t>(rank) || rows[i][col] == 0) continue;
      const std::uint64_t f = rows[i][col];
      for (int c = 0; c <= sys.s; ++c) {
        rows[i][c] = (rows[i][c] + p - static_cast<std::uint64_t>(
                                          u128(f) * rows[rank][c] % p)) % p;
      }
    }
    ++rank;
  }
  for (std::size_t i = rank; i < rows.size(); ++i) {
    if (rows[i][sys.s] != 0) return -1;
  }
  return rank;
}

cpp_int surviving_by_enumeration(const LinearSystem& sys, std::uint64_t p) {
  std::vector<std::uint64_t> u(sys.s, 0);
  std::vector<std::int64_t> value(sys.r);
  for (int j = 0; j < sys.r; ++j) value[j] = mod_p(sys.shifts[j], p);
  std::vector<std::vector<std::int64_t>> coef(sys.r, std::vector<std::int64_t>(sys.s));
  for (int j = 0; j < sys.r; ++j) {
    for (int i = 0; i < sys.s; ++i) coef[j][i] = mod_p(sys.forms[j][i], p);
  }
  const auto P = static_cast<std::int64_t>(p);
  std::uint64_t count = 0;
  while (true) {
    bool ok = true;
    for (int j = 0; j < sys.r && ok; ++j) ok = value[j] != 0;
    count += ok;
    // Odometer increment, keeping each form's value mod p.
    int i = 0;
    for (; i < sys.s; ++i) {
      if (++u[i] < p) {
        for (int j = 0; j < sys.r; ++j) value[j] = (value[j] + coef[j][i]) % P;
        break;
      }
      u[i] = 0;
      // p - 1 -> 0 is still a step of +1 mod p.
      for (int j = 0; j < sys.r; ++j) value[j] = (value[j] + coef[j][i]) % P;
    }
    if (i == sys.s) break;
  }
  return cpp_int(count);
}

cpp_int surviving_by_inclusion_exclusion(const LinearSystem& sys, std::uint64_t p) {
  cpp_int total = 0;
  const cpp_int P(p);
  for (std::uint32_t subset = 0; subset < (1u << sys.r); ++subset) {
    const int rank = subset_rank(sys, subset, p);
    if (rank < 0) continue;
    const cpp_int term = boost::multiprecision::pow(P, sys.s - rank);
    if (std::popcount(subset) % 2) {
      total -= term;
    } else {
      total += term;
    }
  }
  return total;
}

Rational parse_coordinate(const std::string& token) {
  const auto slash = token.find('/');
  try {
    if (slash != std::string::npos) {
      const cpp_int den(token.substr(slash + 1));
      if (den == 0) throw DomainError("zero denominator in '" + token + "'");
      return Rational(cpp_int(token.substr(0, slash)), den);
    }
    if (token.find_first_of(".eE") == std::string::npos) return Rational(cpp_int(token));
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return exact_rational(v);
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception&) {
    throw DomainError("cannot parse number '" + token + "'");
  }
}

std::int64_t parse_integer(const std::string& token) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(token, &used);
  } catch (const std::exception&) {
    throw DomainError("cannot parse integer '" + token + "'");
  }
  if (used != token.size()) throw DomainError("cannot parse integer '" + token + "'");
  return v;
}

double parse_real(const std::string& token) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw DomainError("cannot parse number '" + token + "'");
  }
  if (used != token.size()) throw DomainError("cannot parse number '" + token + "'");
  return v;
}

}  // namespace

Body Body::box(std::vector<Rational> lo, std::vector<Rational> hi) {
  Body b;
  b.kind = Kind::box;
  b.lo = std::move(lo);
  b.hi = std::move(hi);
  return b;
}

Body Body::simplex(std::vector<std::vector<Rational>> vertices) {
  Body b;
  b.kind = Kind::simplex;
  b.vertices = std::move(vertices);
  return b;
}

int Body::dimension() const {
  return kind == Kind::box ? static_cast<int>(lo.size())
                           : static_cast<int>(vertices.size()) - 1;
}

Rational Body::volume() const {
  if (kind == Kind::box) {
    Rational v = 1;
    for (std::size_t i = 0; i < lo.size(); ++i) v *= std::max(Rational(0), Rational(hi[i] - lo[i]));
    return v;
  }
  Rational det = determinant(edge_matrix(*this));
  if (det < 0) det = -det;
  Rational factorial = 1;
  for (int i = 2; i <= dimension(); ++i) factorial *= i;
  return det / factorial;
}

std::vector<std::vector<Rational>> Body::corners() const {
  if (kind == Kind::simplex) return vertices;
  const int s = dimension();
  std::vector<std::vector<Rational>> out;
  for (std::uint32_t mask = 0; mask < (1u << s); ++mask) {
    std::vector<Rational> c(s);
    for (int i = 0; i < s; ++i) c[i] = (mask >> i & 1) ? hi[i] : lo[i];
    out.push_back(std::move(c));
  }
  return out;
}

std::int64_t LinearSystem::max_coefficient() const {
  std::int64_t L = 0;
  for (const auto& row : forms) {
    for (const auto c : row) L = std::max<std::int64_t>(L, c < 0 ? -c : c);
  }
  return L;
}

bool LinearSystem::values_in_range(std::uint64_t N) const {
  const Rational n(N);
  for (const auto& corner : body.corners()) {
    for (int j = 0; j < r; ++j) {
      Rational v = shifts[j];
      for (int i = 0; i < s; ++i) v += Rational(forms[j][i]) * corner[i] * n;
      if (v < 1 || v > n) return false;
    }
  }
  return true;
}

void validate(const LinearSystem& sys) {
  if (sys.s < 2) throw DomainError("linear system needs s >= 2");
  if (sys.r < 1) throw DomainError("linear system needs r >= 1");
  if (sys.r > 24) throw CapacityError("linear system supports at most 24 forms");
  if (static_cast<int>(sys.forms.size()) != sys.r ||
      static_cast<int>(sys.shifts.size()) != sys.r) {
    throw DomainError("expected r forms and r shifts");
  }
  for (const auto& row : sys.forms) {
    if (static_cast<int>(row.size()) != sys.s) throw DomainError("each form needs s coefficients");
    if (std::all_of(row.begin(), row.end(), [](auto c) { return c == 0; })) {
      throw DomainError("zero linear form");
    }
    for (const auto c : row) {
      if (c > (std::int64_t{1} << 31) || c < -(std::int64_t{1} << 31)) {
        throw DomainError("form coefficients must lie in [-2^31, 2^31]");
      }
    }
  }
  for (int a = 0; a < sys.r; ++a) {
    for (int b = a + 1; b < sys.r; ++b) {
      bool independent = false;
      for (int i = 0; i < sys.s && !independent; ++i) {
        for (int j = i + 1; j < sys.s && !independent; ++j) {
          const i128 minor = i128(sys.forms[a][i]) * sys.forms[b][j] -
                             i128(sys.forms[a][j]) * sys.forms[b][i];
          independent = minor != 0;
        }
      }
      if (!independent) throw DomainError("forms must be pairwise linearly independent");
    }
  }
  const Body& b = sys.body;
  if (b.dimension() != sys.s) throw DomainError("body dimension must equal s");
  const auto inside = [](const Rational& v) { return v >= -1 && v <= 1; };
  if (b.kind == Body::Kind::box) {
    if (b.hi.size() != b.lo.size()) throw DomainError("box needs lo and hi per coordinate");
    for (int i = 0; i < sys.s; ++i) {
      if (!inside(b.lo[i]) || !inside(b.hi[i])) throw DomainError("body must lie in [-1, 1]^s");
      if (b.lo[i] > b.hi[i]) throw DomainError("box needs lo <= hi");
    }
  } else {
    for (const auto& v : b.vertices) {
      if (static_cast<int>(v.size()) != sys.s) throw DomainError("vertex dimension must equal s");
      for (const auto& c : v) {
        if (!inside(c)) throw DomainError("body must lie in [-1, 1]^s");
      }
    }
    if (b.volume() == 0) throw DomainError("degenerate simplex");
  }
}

SystemDescriptor parse_descriptor(std::istream& in) {
  SystemDescriptor d;
  LinearSystem& sys = d.system;
  std::optional<int> s, r;
  bool have_body = false, have_shift = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string key;
    if (!(words >> key)) continue;
    std::vector<std::string> args;
    for (std::string w; words >> w;) args.push_back(w);
    const auto fail = [&](const std::string& what) {
      throw DomainError("descriptor line " + std::to_string(line_no) + ": " + what);
    };
    const auto one = [&] {
      if (args.size() != 1) fail("'" + key + "' takes one value");
      return args[0];
    };
    if (key == "s") {
      s = static_cast<int>(parse_integer(one()));
    } else if (key == "r") {
      r = static_cast<int>(parse_integer(one()));
    } else if (key == "form") {
      std::vector<std::int64_t> row;
      for (const auto& a : args) row.push_back(parse_integer(a));
      sys.forms.push_back(std::move(row));
    } else if (key == "shift") {
      for (const auto& a : args) sys.shifts.push_back(parse_integer(a));
      have_shift = true;
    } else if (key == "body") {
      if (args.empty()) fail("'body' needs a kind");
      if (args[0] == "box") {
        if (args.size() % 2 != 1) fail("'body box' takes lo hi pairs");
        std::vector<Rational> lo, hi;
        for (std::size_t i = 1; i < args.size(); i += 2) {
          lo.push_back(parse_coordinate(args[i]));
          hi.push_back(parse_coordinate(args[i + 1]));
        }
        sys.body = Body::box(std::move(lo), std::move(hi));
      } else if (args[0] == "simplex") {
        if (args.size() != 1) fail("'body simplex' takes no values");
        sys.body = Body::simplex({});
      } else {
        fail("unknown body kind '" + args[0] + "'");
      }
      have_body = true;
    } else if (key == "vertex") {
      if (!have_body || sys.body.kind != Body::Kind::simplex) fail("'vertex' needs 'body simplex' first");
      std::vector<Rational> v;
      for (const auto& a : args) v.push_back(parse_coordinate(a));
      sys.body.vertices.push_back(std::move(v));
    } else if (key == "N") {
      const double v = parse_real(one());
      if (!(v >= 1) || v > static_cast<double>(kMaxInteger) || v != std::floor(v)) fail("N must be a positive integer");
      d.N = static_cast<std::uint64_t>(v);
    } else if (key == "y") {
      d.y = parse_real(one());
    } else if (key == "yprime") {
      d.y_lo = parse_real(one());
    } else {
      fail("unknown directive '" + key + "'");
    }
  }
  if (!s || !r) throw DomainError("descriptor needs 's' and 'r'");
  if (!have_body) throw DomainError("descriptor needs a 'body'");
  sys.s = *s;
  sys.r = *r;
  if (!have_shift) sys.shifts.assign(sys.r, 0);
  validate(sys);
  return d;
}

SystemDescriptor parse_descriptor(const std::string& text) {
  std::istringstream in(text);
  return parse_descriptor(in);
}

std::string canonical_descriptor(const SystemDescriptor& d) {
  const LinearSystem& sys = d.system;
  std::ostringstream out;
  out.precision(17);
  out << "s " << sys.s << "\nr " << sys.r << "\n";
  for (const auto& row : sys.forms) {
    out << "form";
    for (const auto c : row) out << " " << c;
    out << "\n";
  }
  out << "shift";
  for (const auto a : sys.shifts) out << " " << a;
  out << "\n";
  if (sys.body.kind == Body::Kind::box) {
    out << "body box";
    for (int i = 0; i < sys.s; ++i) out << " " << sys.body.lo[i].str() << " " << sys.body.hi[i].str();
    out << "\n";
  } else {
    out << "body simplex\n";
    for (const auto& v : sys.body.vertices) {
      out << "vertex";
      for (const auto& c : v) out << " " << c.str();
      out << "\n";
    }
  }
  if (d.N) out << "N " << *d.N << "\n";
  if (d.y) out << "y " << *d.y << "\n";
  if (d.y_lo) out << "yprime " << *d.y_lo << "\n";
  return out.str();
}

LocalFactor local_factor(const LinearSystem& sys, std::uint64_t p,
                         FactorMethod method) {
  if (p < 2 || factorize(p).size() != 1) throw DomainError("local_factor: p must be prime");
  if (p > (std::uint64_t{1} << 31)) throw CapacityError("local_factor: p exceeds 2^31");
  const std::uint64_t size = ipow(p, sys.s);
  const bool enumerable = size <= 10000000ULL;
  if (method == FactorMethod::automatic) {
    method = enumerable ? FactorMethod::enumeration : FactorMethod::inclusion_exclusion;
  }
  if (method == FactorMethod::enumeration && !enumerable) {
    throw CapacityError("local_factor: p^s exceeds the enumeration limit 10^7");
  }
  if (method == FactorMethod::inclusion_exclusion && sys.r > 24) {
    throw CapacityError("local_factor: inclusion-exclusion supports r <= 24");
  }
  const cpp_int surviving = method == FactorMethod::enumeration
                                ? surviving_by_enumeration(sys, p)
                                : surviving_by_inclusion_exclusion(sys, p);
  const cpp_int P(p);
  const Rational beta(surviving * boost::multiprecision::pow(P, sys.r),
                      boost::multiprecision::pow(P - 1, sys.r) *
                          boost::multiprecision::pow(P, sys.s));
  return {p, static_cast<double>(beta), method};
}

SingularSeries singular_series(const LinearSystem& sys, double p_limit) {
  if (!(p_limit >= 2)) throw DomainError("singular_series: p_limit must be >= 2");
  SingularSeries out;
  for (const std::uint64_t p : primes_below(p_limit)) {
    out.value *= local_factor(sys, p).beta;
    out.partial.emplace_back(p, out.value);
  }
  return out;
}

CountResult count_solutions(const LinearSystem& sys, std::uint64_t N,
                            const SmoothWindow& w, bool weighted) {
  validate(sys);
  if (N < 1) throw DomainError("count_solutions: N must be >= 1");
  CountResult out;
  const Rational vol = sys.body.volume();
  out.volume = static_cast<double>(vol);
  out.range_ok = sys.values_in_range(N);

  // Integer bounding box of N K.
  const int s = sys.s;
  std::vector<std::int64_t> lo(s), hi(s);
  const auto corners = sys.body.corners();
  for (int i = 0; i < s; ++i) {
    Rational mn = corners[0][i], mx = corners[0][i];
    for (const auto& c : corners) {
      mn = std::min(mn, c[i]);
      mx = std::max(mx, c[i]);
    }
    lo[i] = static_cast<std::int64_t>(ceil_of(mn * Rational(N)));
    hi[i] = static_cast<std::int64_t>(floor_of(mx * Rational(N)));
  }
  long double points = 1;
  for (int i = 0; i < s; ++i) points *= std::max<long double>(0, hi[i] - lo[i] + 1);
  if (points > 1e10L) throw CapacityError("count_solutions: more than 10^10 lattice points");

  // Largest form value over the box, to size the lookup table.
  i128 vmax = 1;
  for (int j = 0; j < sys.r; ++j) {
    i128 v = sys.shifts[j];
    for (int i = 0; i < s; ++i) {
      const std::int64_t c = sys.forms[j][i];
      v += c >= 0 ? i128(c) * hi[i] : i128(c) * lo[i];
    }
    vmax = std::max(vmax, v);
  }
  const auto table_size = static_cast<std::uint64_t>(vmax) + 1;
  if (table_size > memory_budget_bytes() / sizeof(double) || vmax > i128(kMaxInteger) - 2) {
    throw CapacityError("count_solutions: form values exceed the memory budget");
  }
  // weight[v] = g(v) when weighted, 1 when v is smooth, 0 otherwise.
  std::vector<double> weight(table_size, 0.0);
  if (weighted) {
    const AlphaCache alpha(std::max(2.0, w.y_hi()));
    for_each_weight_g(1, table_size, w, alpha,
                      [&](std::uint64_t n, double g) { weight[n] = g; });
  } else {
    for_each_smooth(1, table_size, w, [&](std::uint64_t n) { weight[n] = 1.0; });
  }

  // Forms with the largest typical value first.
  std::vector<int> order(sys.r);
  std::iota(order.begin(), order.end(), 0);
  std::vector<long double> scale(sys.r, 0);
  for (int j = 0; j < sys.r; ++j) {
    for (int i = 0; i < s; ++i) {
      scale[j] += std::abs(static_cast<long double>(sys.forms[j][i])) *
                  std::max(std::abs(static_cast<long double>(lo[i])),
                           std::abs(static_cast<long double>(hi[i])));
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scale[a] > scale[b]; });

  std::optional<SimplexTest> simplex;
  if (sys.body.kind == Body::Kind::simplex) simplex = simplex_test(sys.body);

  CompensatedSum<double> sum;
  std::uint64_t lattice = 0;
  bool empty = false;
  for (int i = 0; i < s; ++i) empty = empty || lo[i] > hi[i];
  std::vector<std::int64_t> n(lo);
  const auto N64 = static_cast<std::int64_t>(N);
  while (!empty) {
    if (!simplex || simplex->contains(n, N64)) {
      ++lattice;
      double product = 1.0;
      for (const int j : order) {
        i128 v = sys.shifts[j];
        for (int i = 0; i < s; ++i) v += i128(sys.forms[j][i]) * n[i];
        if (v < 1 || v >= i128(table_size)) {
          product = 0.0;
          break;
        }
        product *= weight[static_cast<std::size_t>(v)];
        if (product == 0.0) break;
      }
      if (product != 0.0) sum += product;
    }
    int i = s - 1;
    for (; i >= 0; --i) {
      if (n[i] < hi[i]) {
        ++n[i];
        break;
      }
      n[i] = lo[i];
    }
    if (i < 0) break;
  }
  out.lattice_points = lattice;
  out.value = sum.value();

  out.singular = singular_series(sys, std::max(2.0, w.y_lo())).value;
  const auto Nd = static_cast<double>(N);
  if (weighted) {
    out.predicted = out.volume * std::pow(Nd, s) * out.singular;
  } else {
    const auto psi_n = static_cast<double>(psi(N, w));
    out.predicted = out.volume * std::pow(Nd, s - sys.r) *
                    std::pow(psi_n, sys.r) * out.singular;
  }
  out.ratio = out.predicted == 0 ? 0.0 : out.value / out.predicted;
  return out;
}

AbcResult abc_census(std::uint64_t N, const SmoothWindow& w, bool coprime_only) {
  if (N > 100000) throw CapacityError("abc_census: N exceeds 10^5");
  AbcResult out;
  std::vector<std::uint8_t> smooth(N + 1, 0);
  std::vector<std::uint64_t> list;
  if (N >= 1) {
    for_each_smooth(1, N + 1, w, [&](std::uint64_t n) {
      smooth[n] = 1;
      list.push_back(n);
    });
  }
  out.psi = list.size();
  for (const std::uint64_t a : list) {
    for (const std::uint64_t b : list) {
      if (a + b > N) break;
      if (!smooth[a + b]) continue;
      if (coprime_only && std::gcd(a, b) != 1) continue;
      ++out.count;
    }
  }
  const auto psi_n = static_cast<double>(out.psi);
  out.predicted = N == 0 ? 0.0 : psi_n * psi_n * psi_n / (2.0 * static_cast<double>(N));
  out.ratio = out.predicted == 0 ? 0.0 : static_cast<double>(out.count) / out.predicted;
  return out;
}

}  // namespace friable
