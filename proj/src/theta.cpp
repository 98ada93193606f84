#include "rlab/theta.hpp"

namespace rlab {

namespace {

LaurentZ zpow_key(int key) { return LaurentZ::monomial(CycRat(1L), key); }

const CycRat& minus_i() {
  static const CycRat v = -root_of_unity(Rational(1, 4));
  return v;
}

LaurentZ lift(const Rational& r) { return LaurentZ(CycRat(r)); }

/// z^{m} exp(x) as a nilpotent element over Laurent polynomials.
Nilpotent<LaurentZ> zeta_element(int m, const Nilpotent<Rational>& x, int sign) {
  Nilpotent<Rational> e = (sign > 0 ? x : -x).exp();
  return e.map(lift) * Nilpotent<LaurentZ>(zpow_key(2 * m * sign));
}

}  // namespace

QSeries<Rational> euler_product_power(long k, const Rational& cutoff) {
  QSeries<Rational> s = QSeries<Rational>::one(cutoff);
  long top = to_long(floor_of(cutoff));
  for (long n = 1; n <= top; ++n) {
    for (long j = 0; j < std::abs(k); ++j) {
      if (k > 0)
        s.multiply_one_minus(Rational(n), Rational(1));
      else
        s.divide_one_minus(Rational(n), Rational(1));
    }
  }
  return s;
}

QSeries<Rational> dedekind_eta(const Rational& cutoff) {
  // pentagonal number theorem
  const Rational base(1, 24);
  QSeries<Rational> s(24, cutoff);
  for (long k = 0;; ++k) {
    bool any = false;
    for (long kk : {k, -k}) {
      if (k == 0 && kk == 0 && any) continue;
      Rational e = base + Rational(kk * (3 * kk - 1), 2);
      if (e > cutoff) continue;
      any = true;
      s.add_term(e, Rational(kk % 2 == 0 ? 1 : -1));
    }
    if (!any && k > 0) break;
  }
  return s;
}

QSeries<LaurentZ> jacobi_theta(const Rational& cutoff) {
  LaurentZ sine = (zpow_key(1) - zpow_key(-1)) * LaurentZ(minus_i());
  QSeries<LaurentZ> s(8, cutoff);
  s.add_term(Rational(1, 8), sine);
  long top = to_long(floor_of(cutoff));
  for (long n = 1; n <= top; ++n) {
    s.multiply_one_minus(Rational(n), LaurentZ(1L));
    s.multiply_one_minus(Rational(n), zpow_key(2));
    s.multiply_one_minus(Rational(n), zpow_key(-2));
  }
  return s;
}

QSeries<Rational> theta_prime_zero_over_2pi(const Rational& cutoff) {
  // d/dv zeta^{k/2} at v = 0 is pi i k; divide by 2 pi.
  const CycRat half_i = root_of_unity(Rational(1, 4)) * CycRat(Rational(1, 2));
  return jacobi_theta(cutoff).map([&](const LaurentZ& c) {
    CycRat acc;
    for (const auto& [k, v] : c.terms()) acc += v * CycRat(static_cast<long>(k));
    return (acc * half_i).to_rational();
  });
}

QSeries<Nilpotent<RationalZ>> FactoredSeries::expand() const {
  return series.map([&](const Nilpotent<LaurentZ>& c) {
    return prefactor * c.map([](const LaurentZ& l) { return RationalZ(l); });
  });
}

QSeries<Nilpotent<LaurentZ>> theta_denominator_series(int m, const Nilpotent<Rational>& x, const Rational& cutoff) {
  const Nilpotent<LaurentZ> zeta = zeta_element(m, x, 1);
  const Nilpotent<LaurentZ> zeta_inv = zeta_element(m, x, -1);
  auto s = QSeries<Nilpotent<LaurentZ>>::one(cutoff);
  long top = to_long(floor_of(cutoff));
  for (long n = 1; n <= top; ++n) {
    s.divide_one_minus(Rational(n), zeta);
    s.divide_one_minus(Rational(n), zeta_inv);
  }
  return s;
}

FactoredSeries normalized_reciprocal(int m, const Nilpotent<Rational>& x, const Rational& cutoff) {
  if (m == 0) throw std::domain_error("normalized reciprocal at zeta = exp(nilpotent) is a genuine pole");
  Nilpotent<Rational> half = x * Nilpotent<Rational>(Rational(1, 2));
  Nilpotent<LaurentZ> d = zeta_element(0, half, 1) * Nilpotent<LaurentZ>(zpow_key(m)) -
                          zeta_element(0, half, -1) * Nilpotent<LaurentZ>(zpow_key(-m));
  Nilpotent<RationalZ> pre = d.map([](const LaurentZ& l) { return RationalZ(l); }).inverse();
  pre = pre.map([](const RationalZ& r) { return r.reduced(); });
  auto series = theta_denominator_series(m, x, cutoff) *
                euler_product_power(2, cutoff).map([](const Rational& r) { return Nilpotent<LaurentZ>(lift(r)); });
  return {pre, series};
}

std::vector<Rational> ahat_series(int n) {
  // (e^{x/2} - e^{-x/2}) / x = sum_j [j even] x^j / (2^j (j+1)!), then invert.
  std::vector<Rational> a(static_cast<std::size_t>(n) + 1, Rational(0));
  Rational denom = 1;
  for (int j = 0; j <= n; ++j) {
    denom *= (j + 1);
    if (j > 0) denom *= 2;
    if (j % 2 == 0) a[static_cast<std::size_t>(j)] = 1 / denom;
  }
  std::vector<Rational> b(a.size(), Rational(0));
  b[0] = 1;
  for (std::size_t j = 1; j < a.size(); ++j) {
    Rational acc = 0;
    for (std::size_t i = 1; i <= j; ++i) acc += a[i] * b[j - i];
    b[j] = -acc;
  }
  return b;
}

FactoredSeries tangent_factor(const Nilpotent<Rational>& c, const Rational& cutoff) {
  int top = c.model() ? c.model()->max_degree() : 0;
  Nilpotent<Rational> pre = c.apply_series(ahat_series(top));
  auto series = theta_denominator_series(0, c, cutoff) *
                euler_product_power(2, cutoff).map([](const Rational& r) { return Nilpotent<LaurentZ>(lift(r)); });
  return {pre.map([](const Rational& r) { return RationalZ(r); }), series};
}

Report theta_shift_checks(const Rational& cutoff, bool inject_fault) {
  Report rep("theta elliptic shift laws to q^" + to_string(cutoff));
  // Terms of theta beyond T' have |z-exponent| w > sqrt(2 T') and land above
  // T' - sqrt(2 T') after z -> q z, so a bound E > sqrt(2 T') with T' - E >= T
  // makes the shifted series complete to q^T.
  auto z_bound = [](const Rational& t) {
    Rational e(1);
    while (e * e <= 2 * t) e += Rational(1, 8);
    return e;
  };
  Rational big = cutoff;
  while (big - z_bound(big) < cutoff) big += Rational(1, 2);
  QSeries<LaurentZ> full = jacobi_theta(big);
  if (inject_fault) full.add_term(Rational(9, 8), zpow_key(1));
  QSeries<LaurentZ> th = full.truncated(cutoff);

  auto mismatch_text = [](const QSeries<LaurentZ>& a, const QSeries<LaurentZ>& b, const Rational& e) {
    return "mismatch at q^" + to_string(e) + ": " + a.coefficient(e).str() + " vs " + b.coefficient(e).str();
  };
  auto compare = [&](const std::string& name, const QSeries<LaurentZ>& lhs, const QSeries<LaurentZ>& rhs) {
    auto bad = first_mismatch(lhs, rhs);
    Cutoff w = min_cutoff(lhs.cutoff(), rhs.cutoff());
    std::string win = "window q^" + (w ? to_string(*w) : std::string("inf"));
    if (bad)
      rep.add(name, false, mismatch_text(lhs, rhs, *bad));
    else
      rep.add(name, true, win);
  };

  // theta(t + 1) = -theta(t): zeta^{1/2} -> -zeta^{1/2}
  compare("t -> t+1", th.map([](const LaurentZ& c) { return c.negate_half(); }), -th);

  // theta(t + tau) = -q^{-1/2} zeta^{-1} theta(t)
  QSeries<LaurentZ> lhs = shift_z(full, 1, z_bound(big)).truncated(cutoff);
  QSeries<LaurentZ> rhs =
      full.map([](const LaurentZ& c) { return -(c * zpow_key(-2)); }).q_shifted(Rational(-1, 2)).truncated(cutoff);
  compare("t -> t+tau", lhs, rhs);

  // theta(t, tau + 1) = e^{pi i / 4} theta(t, tau)
  QSeries<LaurentZ> tl =
      th.map_indexed([](const Rational& e, const LaurentZ& c) { return c * LaurentZ(root_of_unity(e)); });
  compare("tau -> tau+1", tl, th.scaled(LaurentZ(root_of_unity(Rational(1, 8)))));
  return rep;
}

}  // namespace rlab
