#pragma once

// q-expansions of the Dedekind eta function, the odd Jacobi theta function
// and the normalized reciprocal R(v) = theta'(0) / (2 pi i theta(v)).
//
// theta is stored over Laurent polynomials in zeta^{1/2} (zeta = e^{2 pi i v})
// with exponents in Z + 1/8; the sine factor is -i (zeta^{1/2} - zeta^{-1/2}).
// Every stored object is free of pi.

#include "rlab/nilpotent.hpp"
#include "rlab/qseries.hpp"
#include "rlab/rational_function.hpp"
#include "rlab/report.hpp"

namespace rlab {

/// c(q)^k = prod_{n >= 1} (1 - q^n)^k to cutoff T (k may be negative).
QSeries<Rational> euler_product_power(long k, const Rational& cutoff);

/// eta(q) = q^{1/24} prod (1 - q^p), D = 24.
QSeries<Rational> dedekind_eta(const Rational& cutoff);

/// theta(v, tau) as a series over Laurent polynomials in zeta^{1/2}, D = 8.
QSeries<LaurentZ> jacobi_theta(const Rational& cutoff);

/// theta'(0, tau) / (2 pi), obtained by differentiating jacobi_theta at v = 0.
QSeries<Rational> theta_prime_zero_over_2pi(const Rational& cutoff);

/// A q-series factored as prefactor * series, where only the prefactor
/// carries denominators in z.
struct FactoredSeries {
  Nilpotent<RationalZ> prefactor;
  QSeries<Nilpotent<LaurentZ>> series;

  /// prefactor * series, coefficientwise.
  QSeries<Nilpotent<RationalZ>> expand() const;
};

/// prod_{n >= 1} 1 / ((1 - q^n zeta)(1 - q^n / zeta)) with zeta = z^m exp(x).
QSeries<Nilpotent<LaurentZ>> theta_denominator_series(int m, const Nilpotent<Rational>& x, const Rational& cutoff);

/// R(v) with zeta = z^m exp(x). Fails when m = 0 (a genuine pole; use
/// tangent_factor for a Chern root).
FactoredSeries normalized_reciprocal(int m, const Nilpotent<Rational>& x, const Rational& cutoff);

/// c R(c) for a nilpotent class c: prefactor c / (e^{c/2} - e^{-c/2}).
FactoredSeries tangent_factor(const Nilpotent<Rational>& c, const Rational& cutoff);

/// Coefficients of x / (e^{x/2} - e^{-x/2}) up to x^n.
std::vector<Rational> ahat_series(int n);

/// The three elliptic laws of theta at the series level. With
/// `inject_fault` one coefficient is corrupted before checking.
Report theta_shift_checks(const Rational& cutoff, bool inject_fault = false);

}  // namespace rlab
