#pragma once

// Floating-point evaluation of series and of the classical functions at
// points (t, tau) with Im tau > 0. q = e^{2 pi i tau}, z = e^{2 pi i t}.

#include "rlab/nilpotent.hpp"
#include "rlab/qseries.hpp"
#include "rlab/rational_function.hpp"

#include <complex>
#include <vector>

namespace rlab {

using cplx = std::complex<double>;

struct EvalResult {
  cplx value;
  double tail_bound = 0.0;  // estimate of the truncation residual
  bool warn = false;        // tail bound is not small relative to the value
};

cplx q_power(cplx tau, const Rational& e);

/// Series evaluation in ascending exponent order with the geometric tail
/// estimate C |q|^{T + d} / (1 - |q|^d), d = 1/D, C = max coefficient size
/// over the last five stored exponents.
EvalResult eval(const QSeries<Rational>& s, cplx tau);
EvalResult eval(const QSeries<CycRat>& s, cplx tau);
EvalResult eval(const QSeries<LaurentZ>& s, cplx tau, cplx t);
EvalResult eval(const QSeries<RationalZ>& s, cplx tau, cplx t);

/// theta(v, tau) from the triple-product sum -i sum (-1)^n q^{(n+1/2)^2/2} e^{2 pi i (n+1/2) v}.
cplx theta_value(cplx v, cplx tau);
/// j-th derivative in v of the same sum.
cplx theta_derivative(cplx v, cplx tau, int j);
/// eta(tau) from the product.
cplx eta_value(cplx tau);

/// theta evaluated at v0 + eps for a nilpotent eps (Taylor expansion).
Nilpotent<cplx> theta_at(cplx v0, const Nilpotent<cplx>& eps, cplx tau);

}  // namespace rlab
