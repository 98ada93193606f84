#include "rlab/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace rlab {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
const cplx kI(0.0, 1.0);

void check_tau(cplx tau) {
  if (!(tau.imag() > 0.0)) throw std::domain_error("tau must lie in the upper half plane (|q| < 1)");
}

template <class C, class F>
EvalResult eval_generic(const QSeries<C>& s, cplx tau, F&& value_of) {
  check_tau(tau);
  EvalResult r;
  std::vector<double> mags;
  for (const auto& [k, c] : s.terms()) {
    cplx v = value_of(c) * q_power(tau, s.exponent_of(k));
    r.value += v;
    mags.push_back(std::abs(value_of(c)));
  }
  if (s.cutoff()) {
    double cmax = 0.0;
    for (std::size_t i = mags.size() > 5 ? mags.size() - 5 : 0; i < mags.size(); ++i) cmax = std::max(cmax, mags[i]);
    double aq = std::exp(-kTwoPi * tau.imag());
    double delta = 1.0 / static_cast<double>(s.denom());
    double t = s.cutoff()->get_d();
    r.tail_bound = cmax * std::pow(aq, t + delta) / (1.0 - std::pow(aq, delta));
    r.warn = r.tail_bound > 1e-6 * std::max(1.0, std::abs(r.value));
  }
  return r;
}

}  // namespace

cplx q_power(cplx tau, const Rational& e) { return std::exp(kTwoPi * kI * tau * e.get_d()); }

EvalResult eval(const QSeries<Rational>& s, cplx tau) {
  return eval_generic(s, tau, [](const Rational& c) { return cplx(c.get_d(), 0.0); });
}

EvalResult eval(const QSeries<CycRat>& s, cplx tau) {
  return eval_generic(s, tau, [](const CycRat& c) { return c.to_complex(); });
}

EvalResult eval(const QSeries<LaurentZ>& s, cplx tau, cplx t) {
  const cplx w = std::exp(M_PI * kI * t);
  return eval_generic(s, tau, [&](const LaurentZ& c) { return c.eval_half(w); });
}

EvalResult eval(const QSeries<RationalZ>& s, cplx tau, cplx t) {
  const cplx w = std::exp(M_PI * kI * t);
  return eval_generic(s, tau, [&](const RationalZ& c) { return c.eval_half(w); });
}

cplx theta_derivative(cplx v, cplx tau, int j) {
  check_tau(tau);
  cplx acc = 0.0;
  for (long n = 0; n < 100000; ++n) {
    cplx step = 0.0;
    for (long m : {n, -n - 1}) {
      double h = static_cast<double>(m) + 0.5;
      cplx term = std::exp(kTwoPi * kI * (tau * (h * h / 2.0) + h * v));
      cplx f = std::pow(kTwoPi * kI * h, j);
      step += ((m % 2 == 0) ? 1.0 : -1.0) * f * term;
    }
    acc += step;
    if (n > 3 && std::abs(step) <= 1e-18 * std::abs(acc)) break;
    if (n > 3 && std::abs(acc) == 0.0 && std::abs(step) < 1e-300) break;
  }
  return -kI * acc;
}

cplx theta_value(cplx v, cplx tau) { return theta_derivative(v, tau, 0); }

cplx eta_value(cplx tau) {
  check_tau(tau);
  cplx q = std::exp(kTwoPi * kI * tau);
  cplx acc = std::exp(kTwoPi * kI * tau / 24.0);
  cplx qn = q;
  for (int n = 1; n < 100000 && std::abs(qn) > 1e-18; ++n) {
    acc *= (1.0 - qn);
    qn *= q;
  }
  return acc;
}

Nilpotent<cplx> theta_at(cplx v0, const Nilpotent<cplx>& eps, cplx tau) {
  int top = eps.model() ? eps.model()->max_degree() : 0;
  std::vector<cplx> taylor(static_cast<std::size_t>(top) + 1);
  double fact = 1.0;
  for (int j = 0; j <= top; ++j) {
    if (j > 0) fact *= j;
    taylor[static_cast<std::size_t>(j)] = theta_derivative(v0, tau, j) / fact;
  }
  return eps.apply_series(taylor);
}

}  // namespace rlab
