#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_N).
//
// An element is stored in the power basis 1, zeta_N, ..., zeta_N^{phi(N)-1},
// i.e. already reduced modulo the N-th cyclotomic polynomial, which makes
// equality decidable. Binary operations promote both operands to the lcm of
// their conductors. Values are immutable in practice and safe to share
// across threads; the per-conductor reduction tables live in a guarded cache.

#include "rlab/rational.hpp"

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlab {

/// Integer-coefficient polynomial, index = power of x.
using IntPoly = std::vector<long>;

/// Phi_n, monic of degree phi(n).
IntPoly cyclotomic_polynomial(long n);

long euler_phi(long n);

class ConductorCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Global guard against conductor blowup (default 10^4).
void set_conductor_cap(long cap);
long conductor_cap();

class CycRat {
 public:
  CycRat() : coeffs_(1) {}
  CycRat(long v) : coeffs_{Rational(v)} {}  // NOLINT(google-explicit-constructor)
  CycRat(const Rational& r) : coeffs_{r} {}  // NOLINT(google-explicit-constructor)

  /// Builds from power-basis coefficients; `coeffs` may be longer than
  /// phi(N), the excess is reduced away.
  static CycRat from_power_basis(long conductor, const std::vector<Rational>& coeffs);

  /// e^{2 pi i r}; conductor is the denominator of r mod 1.
  static CycRat root_of_unity(const Rational& r);

  long conductor() const { return conductor_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  bool is_rational() const;
  /// The rational value; throws if the element is not rational.
  Rational to_rational() const;

  /// Re-expresses in Q(zeta_M); requires conductor() | M.
  CycRat promote(long m) const;
  /// Drops to conductor 1 when the value is rational.
  CycRat demoted() const;

  CycRat conj() const;
  CycRat inverse() const;
  std::complex<double> to_complex() const;

  CycRat operator-() const;
  CycRat& operator+=(const CycRat& o);
  CycRat& operator-=(const CycRat& o);
  CycRat& operator*=(const CycRat& o);
  CycRat& operator/=(const CycRat& o) { return *this *= o.inverse(); }

  friend CycRat operator+(CycRat a, const CycRat& b) { return a += b; }
  friend CycRat operator-(CycRat a, const CycRat& b) { return a -= b; }
  friend CycRat operator*(CycRat a, const CycRat& b) { return a *= b; }
  friend CycRat operator/(CycRat a, const CycRat& b) { return a /= b; }
  friend bool operator==(const CycRat& a, const CycRat& b);

  CycRat pow(long e) const;

  /// Textual form: "[(r, c), ...]" meaning sum of c * e^{2 pi i r}.
  std::string str() const;
  static CycRat parse(const std::string& text);

  /// (exponent r, coefficient) pairs of the textual form.
  std::vector<std::pair<Rational, Rational>> terms() const;

 private:
  CycRat(long conductor, std::vector<Rational> coeffs) : conductor_(conductor), coeffs_(std::move(coeffs)) {}

  long conductor_ = 1;
  std::vector<Rational> coeffs_;
};

inline bool is_zero(const CycRat& c) { return c.is_zero(); }
inline CycRat inverse(const CycRat& c) { return c.inverse(); }
inline CycRat conj(const CycRat& c) { return c.conj(); }
inline std::complex<double> to_complex(const CycRat& c) { return c.to_complex(); }

inline bool is_zero(const Rational& r) { return r == 0; }
inline Rational inverse(const Rational& r) {
  if (r == 0) throw std::domain_error("division by zero");
  return 1 / r;
}
inline Rational conj(const Rational& r) { return r; }
inline std::complex<double> to_complex(const Rational& r) { return {r.get_d(), 0.0}; }

inline CycRat root_of_unity(const Rational& r) { return CycRat::root_of_unity(r); }

inline bool is_zero(const std::complex<double>& x) { return x == std::complex<double>(0.0, 0.0); }
inline std::complex<double> inverse(const std::complex<double>& x) {
  if (is_zero(x)) throw std::domain_error("division by zero");
  return 1.0 / x;
}
inline std::complex<double> to_complex(const std::complex<double>& x) { return x; }

// Generic entry points for the container templates; unqualified calls pick
// up later overloads for library types through argument-dependent lookup.
namespace ring {
template <class C>
bool zero(const C& c) {
  return is_zero(c);
}
template <class C>
C inv(const C& c) {
  return inverse(c);
}
template <class C>
C cj(const C& c) {
  return conj(c);
}
template <class C>
std::complex<double> cplx(const C& c) {
  return to_complex(c);
}
}  // namespace ring

}  // namespace rlab
