#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rlab/qseries.hpp"
#include "rlab/qseries_io.hpp"
#include "rlab/rational_function.hpp"
#include "rlab/theta.hpp"

#include <random>

using namespace rlab;
using QR = QSeries<Rational>;

namespace {

QR geometric(const Rational& cutoff) {
  QR s(1, cutoff);
  for (long n = 0; n <= to_long(floor_of(cutoff)); ++n) s.add_term(Rational(n), Rational(1));
  return s;
}

QR random_series(std::mt19937& rng, long denom, const Rational& cutoff) {
  std::uniform_int_distribution<int> coef(-5, 5), key(-denom, to_long(floor_of(cutoff * denom)));
  QR s(denom, cutoff);
  for (int j = 0; j < 8; ++j) s.add_term(ratio(key(rng), denom), Rational(coef(rng)));
  return s;
}

LaurentZ w(int key) { return LaurentZ::monomial(CycRat(1L), key); }

}  // namespace

TEST_CASE("telescoping and exponent addition") {
  QR one_minus_q(1);
  one_minus_q.add_term(Rational(0), Rational(1));
  one_minus_q.add_term(Rational(1), Rational(-1));
  QR prod = one_minus_q * geometric(Rational(10));
  CHECK(prod.cutoff() == Rational(10));
  CHECK(prod == QR::one(Rational(10)));

  QR a = QR::monomial(Rational(1), Rational(1, 2));
  QR b = QR::monomial(Rational(1), Rational(1, 3));
  QR c = a * b;
  CHECK(c.denom() == 6);
  CHECK(c.terms().size() == 1);
  CHECK(c.coefficient(Rational(5, 6)) == 1);
  CHECK(c.exact());
}

TEST_CASE("cutoff bookkeeping") {
  // q^2 (1 + O(q^5)) times (1 + O(q^3)): known to q^5
  QR a = QR::monomial(Rational(1), Rational(2), Rational(5));
  QR b = QR::monomial(Rational(1), Rational(0), Rational(3));
  CHECK((a * b).cutoff() == Rational(5));
  CHECK((a + b).cutoff() == Rational(3));
  CHECK_THROWS_AS(b.coefficient(Rational(4)), std::out_of_range);
  // an empty series with a cutoff is O(q^T), not zero
  QR o(1, Rational(2));
  CHECK((o * b).cutoff() == Rational(2));
  CHECK((o * b).is_zero());
}

TEST_CASE("eta times its inverse") {
  QR eta = dedekind_eta(Rational(20) + Rational(1, 24) + Rational(1, 24));
  QR inv = eta.inverse();
  QR prod = eta * inv;
  CHECK(*prod.cutoff() >= Rational(20));
  CHECK(prod == QR::one(prod.cutoff()));
}

TEST_CASE("inversion") {
  QR g = geometric(Rational(12));
  QR inv = g.inverse();
  QR expect(1);
  expect.add_term(Rational(0), Rational(1));
  expect.add_term(Rational(1), Rational(-1));
  CHECK(first_mismatch(inv, expect) == std::nullopt);
  CHECK(*inv.cutoff() == Rational(12));

  CHECK_THROWS(QR(1, Rational(3)).inverse());
  CHECK_THROWS(QR::one().inverse());

  // rational-function coefficients: (z^{1/2} - z^{-1/2}) + 0 q
  QSeries<RationalZ> d(1, Rational(3));
  d.add_term(Rational(0), RationalZ(w(1) - w(-1)));
  auto di = d.inverse();
  CHECK(di.coefficient(Rational(0)) == RationalZ(LaurentZ(1L), w(1) - w(-1)));
  CHECK(di.coefficient(Rational(1)).is_zero());
}

TEST_CASE("ring laws on random sparse series") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 25; ++trial) {
    QR a = random_series(rng, 6, Rational(4));
    QR b = random_series(rng, 4, Rational(5));
    QR c = random_series(rng, 3, Rational(3));
    QR ab_c = (a * b) * c, a_bc = a * (b * c);
    CHECK(first_mismatch(ab_c, a_bc) == std::nullopt);
    QR lhs = a * (b + c), rhs = a * b + a * c;
    CHECK(first_mismatch(lhs, rhs) == std::nullopt);
    CHECK(first_mismatch(a * b, b * a) == std::nullopt);
  }
}

TEST_CASE("double inversion") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    QR a = random_series(rng, 2, Rational(6));
    a.add_term(Rational(-2), Rational(3));  // unit lowest term below the noise
    auto v = a.valuation();
    if (!v || a.coefficient(*v) == 0) continue;
    QR back = a.inverse().inverse();
    CHECK(first_mismatch(back, a) == std::nullopt);
  }
}

TEST_CASE("geometric primitives agree with products") {
  QR s = QR::one(Rational(15));
  s.divide_one_minus(Rational(2), Rational(3));
  QR f(1);
  f.add_term(Rational(0), Rational(1));
  f.add_term(Rational(2), Rational(-3));
  CHECK(first_mismatch(s * f, QR::one(Rational(15))) == std::nullopt);
  s.multiply_one_minus(Rational(2), Rational(3));
  CHECK(s == QR::one(Rational(15)));
}

TEST_CASE("shift_z") {
  QSeries<LaurentZ> a(1, Rational(10));
  a.add_term(Rational(0), w(2) + w(-2));
  auto s = shift_z(a, 2, Rational(1));
  CHECK(s.coefficient(Rational(2)) == w(2));
  CHECK(s.coefficient(Rational(-2)) == w(-2));
  CHECK(*s.cutoff() == Rational(8));

  QSeries<LaurentZ> c(1, Rational(10));
  c.add_term(Rational(1), LaurentZ(5L));
  CHECK(first_mismatch(shift_z(c, 2), c) == std::nullopt);

  QSeries<LaurentZ> e(1, Rational(10));
  e.add_term(Rational(0), w(6));
  CHECK(*shift_z(e, 2).cutoff() == Rational(4));

  // odd shifts of half-integral powers need D = 2
  QSeries<LaurentZ> h(1, Rational(4));
  h.add_term(Rational(1), w(1));
  auto hs = shift_z(h, 1);
  CHECK(hs.denom() % 2 == 0);
  CHECK(hs.coefficient(Rational(3, 2)) == w(1));
}

TEST_CASE("shift_z round trip on the doubly restricted window") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> coef(-3, 3), zk(-4, 4), qk(0, 12);
  for (int trial = 0; trial < 10; ++trial) {
    QSeries<LaurentZ> a(1, Rational(12));
    for (int j = 0; j < 10; ++j)
      a.add_term(Rational(qk(rng)), LaurentZ::monomial(CycRat(static_cast<long>(coef(rng))), zk(rng)));
    Rational e = max_abs_z_exponent(a);
    auto back = shift_z(shift_z(a, 2, e), -2, e);
    CHECK(*back.cutoff() == Rational(12) - 4 * e);
    CHECK(first_mismatch(back, a) == std::nullopt);
  }
}

TEST_CASE("text and json round trips") {
  QR eta = dedekind_eta(Rational(6));
  CHECK(parse_series_text<Rational>(series_text(eta)) == eta);
  CHECK(parse_series_json<Rational>(series_json(eta)) == eta);

  auto th = jacobi_theta(Rational(33, 8));
  CHECK(parse_series_text<LaurentZ>(series_text(th)) == th);
  CHECK(parse_series_json<LaurentZ>(series_json(th)) == th);

  QSeries<CycRat> cs(4);
  cs.add_term(Rational(1, 4), root_of_unity(Rational(1, 3)));
  cs.add_term(Rational(2), CycRat(Rational(-5, 7)));
  CHECK(parse_series_text<CycRat>(series_text(cs)) == cs);
  CHECK_THROWS_AS(parse_series_text<Rational>("1/2 3\n"), std::invalid_argument);
}
