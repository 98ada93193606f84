#pragma once

// Arbitrary-precision rationals (GMP) plus the small helpers the rest of
// the library leans on: parsing "p/q", gcd/lcm on machine integers, and
// floor/ceil on rationals.

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rlab {

using Rational = mpq_class;
using Integer = mpz_class;
using RatVec = std::vector<Rational>;

/// Parses "p", "p/q", "-p/q" (surrounding whitespace allowed).
Rational parse_rational(std::string_view text);

/// Canonical text: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& r);

/// Canonical text of a rational vector: "a,b,c".
std::string to_string(const RatVec& v);

/// Parses "a/b,c,d/e" into a vector; empty string gives an empty vector.
RatVec parse_rat_vec(std::string_view text);

Integer floor_of(const Rational& r);
Integer ceil_of(const Rational& r);

/// r mod 1 in [0, 1).
Rational frac_part(const Rational& r);

long to_long(const Integer& z);
long to_long_exact(const Rational& r);  // throws unless r is an integer

inline long lcm_long(long a, long b) {
  if (a == 0 || b == 0) return 0;
  return std::lcm(a < 0 ? -a : a, b < 0 ? -b : b);
}

/// n/d in canonical form.
inline Rational ratio(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

inline Rational abs_of(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline long denominator_of(const Rational& r) { return to_long(r.get_den()); }

}  // namespace rlab
