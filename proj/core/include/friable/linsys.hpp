#pragma once

// Simultaneous smooth values of shifted linear forms psi_j(n) + a_j over the
// lattice points of a dilated body N K, and the local factors
//
//   beta_p = p^-s sum_{u in (Z/p)^s} prod_j (p/(p-1)) 1[psi_j(u) + a_j != 0 mod p].

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "friable/polyphase.hpp"
#include "friable/sieve.hpp"

namespace friable {

// An axis-aligned box or a simplex with rational vertices in [-1, 1]^s.
struct Body {
  enum class Kind { box, simplex };
  Kind kind = Kind::box;
  std::vector<Rational> lo, hi;              // box
  std::vector<std::vector<Rational>> vertices;  // simplex, s + 1 points

  static Body box(std::vector<Rational> lo, std::vector<Rational> hi);
  static Body simplex(std::vector<std::vector<Rational>> vertices);

  int dimension() const;
  Rational volume() const;
  // Vertices of the body (2^s corners for a box).
  std::vector<std::vector<Rational>> corners() const;
};

struct LinearSystem {
  int s = 2;
  int r = 1;
  std::vector<std::vector<std::int64_t>> forms;  // r rows of s coefficients
  std::vector<std::int64_t> shifts;              // r entries
  Body body;

  std::int64_t max_coefficient() const;
  // psi_j(N K) + a_j in [1, N] for every j, checked at the vertices.
  bool values_in_range(std::uint64_t N) const;
};

// Throws DomainError on malformed sizes, a body outside [-1, 1]^s, a
// degenerate simplex, or forms that are not pairwise linearly independent.
void validate(const LinearSystem& sys);

// A system together with the run parameters stored in a descriptor file.
struct SystemDescriptor {
  LinearSystem system;
  std::optional<std::uint64_t> N;
  std::optional<double> y;
  std::optional<double> y_lo;
};

// Plain-text descriptor, one directive per line, '#' starts a comment:
//   s 2
//   r 3
//   form 1 0            (r lines)
//   shift 0 0 0
//   body box lo1 hi1 lo2 hi2   |   body simplex  followed by s+1 'vertex' lines
//   N 1000
//   y 31.6
//   yprime 1
// Coordinates may be integers, decimals or fractions p/q.
SystemDescriptor parse_descriptor(std::istream& in);
SystemDescriptor parse_descriptor(const std::string& text);
std::string canonical_descriptor(const SystemDescriptor& d);

enum class FactorMethod { automatic, enumeration, inclusion_exclusion };

struct LocalFactor {
  std::uint64_t p = 2;
  double beta = 1;
  FactorMethod method = FactorMethod::automatic;  // the one actually used
};

// Enumeration when p^s <= 10^7, inclusion-exclusion over subsets of forms
// otherwise (r <= 24). Both produce the exact surviving count, so they agree
// bitwise. Throws CapacityError when neither strategy fits.
LocalFactor local_factor(const LinearSystem& sys, std::uint64_t p,
                         FactorMethod method = FactorMethod::automatic);

struct SingularSeries {
  double value = 1;
  std::vector<std::pair<std::uint64_t, double>> partial;  // (p, prod_{q <= p})
};

// prod_{p < p_limit} beta_p.
SingularSeries singular_series(const LinearSystem& sys, double p_limit);

struct CountResult {
  double value = 0;       // count, or sum of products of g
  double predicted = 0;
  double ratio = 0;       // value / predicted (0 when predicted is 0)
  std::uint64_t lattice_points = 0;
  double volume = 0;
  double singular = 1;    // prod_{p < y'} beta_p
  bool range_ok = false;  // values_in_range(N)
};

// Unweighted: #{n in Z^s cap N K : psi_j(n) + a_j in S for all j}, against
// vol(K) N^(s-r) Psi(N)^r prod beta_p. Weighted: sum of prod_j g(psi_j(n)+a_j)
// against vol(K) N^s prod beta_p. Throws CapacityError beyond 10^10 points.
CountResult count_solutions(const LinearSystem& sys, std::uint64_t N,
                            const SmoothWindow& w, bool weighted);

struct AbcResult {
  std::uint64_t count = 0;
  double predicted = 0;  // Psi(N)^3 / (2N)
  double ratio = 0;
  std::uint64_t psi = 0;
};

// Ordered pairs (n1, n2) of positive integers with n1 + n2 <= N and n1, n2,
// n1 + n2 all in S([y', y]); optionally gcd(n1, n2) = 1. N <= 10^5.
AbcResult abc_census(std::uint64_t N, const SmoothWindow& w, bool coprime_only);

}  // namespace friable
