#pragma once

// Rational functions num/den of z^{1/2} over the cyclotomic coefficients.
//
// Arithmetic is lazy: sums with identical denominators add numerators,
// everything else cross-multiplies without cancelling. reduce() brings a
// value to canonical form (gcd removed, denominator a monic polynomial in
// z^{1/2} with nonzero constant term). The genus engine reduces once per
// summation rather than after every product.

#include "rlab/laurent.hpp"

#include <optional>
#include <string>

namespace rlab {

class RationalZ {
 public:
  RationalZ() : den_(1L) {}
  RationalZ(const LaurentZ& num) : num_(num), den_(1L) {}  // NOLINT(google-explicit-constructor)
  RationalZ(const CycRat& c) : num_(c), den_(1L) {}        // NOLINT(google-explicit-constructor)
  RationalZ(const Rational& c) : num_(CycRat(c)), den_(1L) {}  // NOLINT(google-explicit-constructor)
  RationalZ(long c) : num_(c), den_(1L) {}                 // NOLINT(google-explicit-constructor)
  RationalZ(LaurentZ num, LaurentZ den);

  const LaurentZ& num() const { return num_; }
  const LaurentZ& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }

  /// Canonical form.
  RationalZ reduced() const;

  RationalZ operator-() const { return RationalZ(-num_, den_, Unchecked{}); }
  RationalZ& operator+=(const RationalZ& o);
  RationalZ& operator-=(const RationalZ& o) { return *this += -o; }
  RationalZ& operator*=(const RationalZ& o);
  RationalZ& operator/=(const RationalZ& o) { return *this *= o.inverse(); }

  friend RationalZ operator+(RationalZ a, const RationalZ& b) { return a += b; }
  friend RationalZ operator-(RationalZ a, const RationalZ& b) { return a -= b; }
  friend RationalZ operator*(RationalZ a, const RationalZ& b) { return a *= b; }
  friend RationalZ operator/(RationalZ a, const RationalZ& b) { return a /= b; }
  friend RationalZ operator*(RationalZ a, const Rational& s) {
    a.num_ = a.num_ * s;
    return a;
  }
  /// Value equality (cross-multiplied, independent of representation).
  friend bool operator==(const RationalZ& a, const RationalZ& b) { return a.num_ * b.den_ == b.num_ * a.den_; }

  RationalZ inverse() const;
  RationalZ conj_coefficients() const { return RationalZ(num_.conj_coefficients(), den_.conj_coefficients()); }
  RationalZ invert_variable() const { return RationalZ(num_.invert_variable(), den_.invert_variable()); }
  std::complex<double> eval_half(std::complex<double> w) const { return num_.eval_half(w) / den_.eval_half(w); }

  std::string str() const;

 private:
  struct Unchecked {};
  RationalZ(LaurentZ num, LaurentZ den, Unchecked) : num_(std::move(num)), den_(std::move(den)) {}

  LaurentZ num_;
  LaurentZ den_;
};

inline bool is_zero(const RationalZ& f) { return f.is_zero(); }
inline RationalZ inverse(const RationalZ& f) { return f.inverse(); }
inline RationalZ conj(const RationalZ& f) { return f.conj_coefficients(); }

/// Outcome of trying to reduce a rational function to a Laurent polynomial.
struct Reduction {
  std::optional<LaurentZ> value;  // present on success
  LaurentZ residual;              // canonical denominator left over on failure (1 on success)
  bool ok() const { return value.has_value(); }
};

Reduction reduce_rational(const RationalZ& f);

}  // namespace rlab
