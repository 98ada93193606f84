#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rlab/cyclotomic.hpp"
#include "rlab/laurent.hpp"
#include "rlab/nilpotent.hpp"
#include "rlab/rational_function.hpp"

#include <random>

using namespace rlab;

namespace {

// Phi_n by dividing x^n - 1 by Phi_d for every proper divisor d (recursive).
IntPoly phi_by_division(long n) {
  IntPoly num(static_cast<std::size_t>(n) + 1, 0);
  num[0] = -1;
  num[static_cast<std::size_t>(n)] = 1;
  for (long d = 1; d < n; ++d) {
    if (n % d) continue;
    IntPoly den = phi_by_division(d);
    IntPoly q(num.size() - den.size() + 1, 0);
    for (std::size_t i = q.size(); i-- > 0;) {
      long c = num[i + den.size() - 1];
      q[i] = c;
      for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
    }
    num = q;
  }
  return num;
}

LaurentZ w(int key) { return LaurentZ::monomial(CycRat(1L), key); }

}  // namespace

TEST_CASE("rational parsing and helpers") {
  CHECK(parse_rational(" -6/4 ") == Rational(-3, 2));
  CHECK(to_string(parse_rational("10/5")) == "2");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/x"), std::invalid_argument);
  CHECK(floor_of(Rational(-7, 2)) == -4);
  CHECK(ceil_of(Rational(-7, 2)) == -3);
  CHECK(frac_part(Rational(-1, 4)) == Rational(3, 4));
  CHECK(to_string(parse_rat_vec("1/2, -3")) == "1/2,-3");
}

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(1) == IntPoly{-1, 1});
  CHECK(cyclotomic_polynomial(4) == IntPoly{1, 0, 1});
  CHECK(cyclotomic_polynomial(12) == IntPoly{1, 0, -1, 0, 1});
  for (long n = 1; n <= 60; ++n) {
    CHECK(cyclotomic_polynomial(n) == phi_by_division(n));
    CHECK(static_cast<long>(cyclotomic_polynomial(n).size()) - 1 == euler_phi(n));
  }
}

TEST_CASE("roots of unity") {
  CHECK(root_of_unity(0) == CycRat(1L));
  CHECK(root_of_unity(Rational(1, 2)) == CycRat(-1L));
  CycRat z3 = root_of_unity(Rational(1, 3));
  CHECK(z3 * z3 + z3 + 1 == CycRat(0L));
  CHECK(z3 + z3.pow(2) == CycRat(-1L));
  CycRat z8 = root_of_unity(Rational(1, 8));
  CHECK(z8 * z8.inverse() == CycRat(1L));
  auto i = to_complex(root_of_unity(Rational(1, 4)));
  CHECK(std::abs(i - std::complex<double>(0, 1)) < 1e-15);
  CHECK(root_of_unity(Rational(5, 4)) == root_of_unity(Rational(1, 4)));
  CHECK_THROWS(CycRat(0L).inverse());
}

TEST_CASE("root of unity properties") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(-40, 40), den(1, 30);
  for (int trial = 0; trial < 60; ++trial) {
    Rational r(num(rng), den(rng)), s(num(rng), den(rng));
    r.canonicalize();
    s.canonicalize();
    CHECK(root_of_unity(r) * root_of_unity(s) == root_of_unity(r + s));
    CHECK(root_of_unity(r).pow(denominator_of(r)) == CycRat(1L));
    CHECK(conj(root_of_unity(r)) == root_of_unity(-r));
    auto zr = to_complex(root_of_unity(r));
    CHECK(std::abs(zr - std::polar(1.0, 2 * M_PI * r.get_d())) < 1e-12);
  }
}

TEST_CASE("to_complex is a ring homomorphism") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-1000000, 1000000), e(0, 239);
  for (int trial = 0; trial < 40; ++trial) {
    CycRat a, b;
    for (int j = 0; j < 3; ++j) {
      a += root_of_unity(ratio(e(rng), 240)) * CycRat(Rational(num(rng)));
      b += root_of_unity(ratio(e(rng), 240)) * CycRat(Rational(num(rng)));
    }
    auto ca = to_complex(a), cb = to_complex(b);
    auto prod = to_complex(a * b), sum = to_complex(a + b);
    CHECK(std::abs(prod - ca * cb) <= 1e-12 * (std::abs(ca) * std::abs(cb) + 1));
    CHECK(std::abs(sum - (ca + cb)) <= 1e-12 * (std::abs(ca) + std::abs(cb) + 1));
  }
}

TEST_CASE("promotion and text form") {
  CycRat i = root_of_unity(Rational(1, 4));
  CycRat p = i.promote(12);
  CHECK(p.conductor() == 12);
  CHECK(p == i);
  CHECK(p.demoted().conductor() == 4);
  CHECK(p.demoted() == i);
  CycRat s3 = root_of_unity(Rational(1, 3)) - root_of_unity(Rational(2, 3));  // i*sqrt(3), in Q(zeta_3)
  CHECK(s3.promote(24).demoted().conductor() == 3);
  CHECK_THROWS(i.promote(6));
  CycRat x = root_of_unity(Rational(1, 8)) * CycRat(Rational(3, 2)) - CycRat(Rational(1, 3));
  CHECK(CycRat::parse(x.str()) == x);
  CHECK(CycRat::parse("[(1/4, 1), (3/4, 1)]") == CycRat(0L));
}

TEST_CASE("conductor cap") {
  long old = conductor_cap();
  set_conductor_cap(100);
  CHECK_THROWS_AS(root_of_unity(Rational(1, 101)), ConductorCapExceeded);
  set_conductor_cap(old);
}

TEST_CASE("laurent polynomials") {
  LaurentZ a = w(2) - LaurentZ(1L);  // z - 1
  LaurentZ b = w(4) - LaurentZ(1L);  // z^2 - 1
  auto q = divide_exact(b, a);
  REQUIRE(q);
  CHECK(*q == w(2) + LaurentZ(1L));
  CHECK(!divide_exact(a, b));
  CHECK(gcd(b, a) == a);
  CHECK((w(1) - w(-1)).negate_half() == -(w(1) - w(-1)));
  CHECK(w(3).invert_variable() == w(-3));
  CHECK(LaurentZ::z_pow(Rational(3, 2)) == w(3));
  CHECK_THROWS(LaurentZ::z_pow(Rational(1, 3)));
}

TEST_CASE("reduce_rational") {
  LaurentZ zm1 = w(2) - LaurentZ(1L);
  auto r = reduce_rational(RationalZ(w(4) - LaurentZ(1L), zm1));
  REQUIRE(r.ok());
  CHECK(*r.value == w(2) + LaurentZ(1L));

  RationalZ d1(LaurentZ(1L), w(1) - w(-1));
  RationalZ d2(LaurentZ(1L), w(-1) - w(1));
  auto s = reduce_rational(d1 + d2);
  REQUIRE(s.ok());
  CHECK(s.value->is_zero());

  auto f = reduce_rational(RationalZ(LaurentZ(1L), zm1));
  CHECK(!f.ok());
  CHECK(f.residual == zm1);

  // reduced form: monic denominator with lowest exponent 0
  RationalZ g = RationalZ(w(3) + w(1), w(2) * LaurentZ(CycRat(Rational(2))) - LaurentZ(2L)).reduced();
  CHECK(g.den().min_key() == 0);
  CHECK(g.den().terms().rbegin()->second == CycRat(1L));
  CHECK(g == RationalZ(w(3) + w(1), w(2) * LaurentZ(2L) - LaurentZ(2L)));
}

TEST_CASE("reduce_rational property: value times denominator") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> c(-4, 4), k(-4, 4);
  for (int trial = 0; trial < 30; ++trial) {
    LaurentZ p, d;
    for (int j = 0; j < 4; ++j) {
      p.add_term(k(rng), CycRat(static_cast<long>(c(rng))));
      d.add_term(k(rng), CycRat(static_cast<long>(c(rng))));
    }
    if (d.is_zero()) continue;
    RationalZ f(p * d, d);
    auto r = reduce_rational(f);
    REQUIRE(r.ok());
    CHECK(*r.value * f.den() - f.num() == LaurentZ());
  }
}

TEST_CASE("nilpotent ring") {
  auto one_gen = std::make_shared<const NilpotentModel>(std::vector<int>{1},
                                                        std::vector<std::pair<std::vector<int>, Rational>>{{{1}, 1}});
  using N = Nilpotent<Rational>;
  N g = N::generator(one_gen, 0);
  CHECK(g.exp() == N(1L) + g);
  CHECK(N::constant(one_gen, 0).exp() == N(1L));
  CHECK((N(Rational(3)) + g * N(Rational(5))).integrate() == 5);
  CHECK(N(Rational(7)).integrate() == 7);

  auto two = std::make_shared<const NilpotentModel>(std::vector<int>{1, 1},
                                                    std::vector<std::pair<std::vector<int>, Rational>>{{{1, 1}, 1}});
  N x = N::generator(two, 0), y = N::generator(two, 1);
  // brute-force expansion of exp(x+y) truncated by x^2 = y^2 = 0
  CHECK((x + y).exp() == N(1L) + x + y + x * y);
  CHECK((x + y).exp().integrate() == 1);
  CHECK_THROWS((N(1L) + x).exp());

  // CP^1: integral of e^c with integral(c) = 2 is 2
  auto cp1 = std::make_shared<const NilpotentModel>(std::vector<int>{1},
                                                    std::vector<std::pair<std::vector<int>, Rational>>{{{1}, 2}});
  CHECK(N::generator(cp1, 0).exp().integrate() == 2);

  N u = N(2L) + x * N(Rational(3)) - y;
  CHECK(u * u.inverse() == N::constant(two, 1));
}
