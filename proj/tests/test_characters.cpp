#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rlab/characters.hpp"

#include <cmath>
#include <random>

using namespace rlab;

namespace {

// Number of c-coloured partitions of n, by the coin-change recursion.
std::vector<long> coloured_partitions(int c, int n) {
  std::vector<long> p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = 1;
  for (int colour = 0; colour < c; ++colour)
    for (int part = 1; part <= n; ++part)
      for (int k = part; k <= n; ++k) p[k] += p[k - part];
  return p;
}

// Lattice points of K + beta in a coordinate box large enough for norm/2 <= bound.
std::vector<RatVec> box_points(const EvenLattice& L, const RatVec& beta, const Rational& bound, long pad = 0) {
  RatMatrix gi = inverse_matrix(L.gram);
  std::vector<long> lo(L.rank), hi(L.rank);
  for (int i = 0; i < L.rank; ++i) {
    double r = std::sqrt(2.0 * bound.get_d() * gi[i][i].get_d()) + 1.0 + static_cast<double>(pad);
    lo[i] = static_cast<long>(std::floor(-r - beta[i].get_d()));
    hi[i] = static_cast<long>(std::ceil(r - beta[i].get_d()));
  }
  std::vector<RatVec> out;
  if (L.rank == 0) return {RatVec{}};
  std::vector<long> k(lo);
  for (;;) {
    RatVec x(L.rank);
    for (int i = 0; i < L.rank; ++i) x[i] = Rational(k[i]) + beta[i];
    out.push_back(x);
    int i = 0;
    while (i < L.rank && ++k[i] > hi[i]) {
      k[i] = lo[i];
      ++i;
    }
    if (i == L.rank) break;
  }
  return out;
}

// Graded trace over M(1) (x) e^g, g in K + beta: each weight vector contributes
// e^{2 pi i ((v,g) + (u,v)/2)} q^{n + (g,g)/2 + (u,g) + (u,u)/2 - c/24}.
QSeries<CycRat> trace_oracle(const EvenLattice& L, const RatVec& beta, const RatVec& v, const RatVec& u,
                             const Rational& cutoff) {
  const int top = static_cast<int>(to_long(floor_of(cutoff))) + 4;
  auto p = coloured_partitions(L.rank, top + 8);
  const Rational shift = L.norm(u) / 2 - ratio(L.rank, 24);
  QSeries<CycRat> s(1, cutoff);
  for (const auto& g : box_points(L, beta, cutoff + 4, 5)) {
    Rational base = L.norm(g) / 2 + L.pair(u, g) + shift;
    CycRat ph = root_of_unity(L.pair(v, g) + L.pair(u, v) / 2);
    for (int n = 0; base + n <= cutoff; ++n)
      s.add_term(base + n, ph * CycRat(p[n]));
  }
  return s;
}

std::vector<std::vector<Rational>> stirling_first(int n) {
  std::vector<std::vector<Rational>> s(n + 1, std::vector<Rational>(n + 1, Rational(0)));
  s[0][0] = 1;
  for (int k = 0; k < n; ++k)
    for (int m = 1; m <= k + 1; ++m) s[k + 1][m] = s[k][m - 1] - Rational(k) * s[k][m];
  return s;
}

Integer binomial(long n, long k) {
  Integer b;
  mpz_bin_ui(b.get_mpz_t(), Integer(n).get_mpz_t(), static_cast<unsigned long>(k));
  return b;
}

}  // namespace

TEST_CASE("A1 vacuum character") {
  auto L = standard_lattice("A1");
  auto chi = character(L, {0}, ExpCharacter::trivial(), std::nullopt, Rational(8));
  CHECK(chi.valuation() == Rational(-1, 24));
  auto p = coloured_partitions(1, 10);
  for (long N = 0; N <= 8; ++N) {
    long expect = 0;
    for (long m = -3; m <= 3; ++m)
      if (N - m * m >= 0) expect += p[N - m * m];
    CHECK(chi.coefficient(Rational(N) - Rational(1, 24)) == CycRat(expect));
  }
  CHECK(chi.coefficient(Rational(23, 24)) == CycRat(3L));
  CHECK(chi.coefficient(Rational(47, 24)) == CycRat(4L));
}

TEST_CASE("other characters") {
  auto r0 = validate({});
  auto one = character(r0, {}, ExpCharacter::trivial(), std::nullopt, Rational(5));
  CHECK(one == QSeries<CycRat>::one(Rational(5)));

  auto a1 = standard_lattice("A1");
  auto chi1 = character(a1, {Rational(1, 2)}, ExpCharacter::trivial(), std::nullopt, Rational(5));
  CHECK(chi1.valuation() == Rational(5, 24));
  CHECK(chi1.coefficient(Rational(5, 24)) == CycRat(2L));
  CHECK(coset_min_norm(a1, {Rational(-3, 2)}) == Rational(1, 4));
}

TEST_CASE("trivial-phase characters are graded dimensions") {
  for (const char* name : {"A1", "A2", "gram4", "D4"}) {
    auto L = standard_lattice(name);
    auto dd = discriminant_group(L);
    for (const auto& beta : dd.coset_reps) {
      auto chi = character(L, beta, ExpCharacter::trivial(), std::nullopt, Rational(4));
      REQUIRE(chi.valuation().has_value());
      CHECK(*chi.valuation() == coset_min_norm(L, beta) - ratio(L.rank, 24));
      for (const auto& [k, c] : chi.terms()) {
        REQUIRE(c.is_rational());
        CHECK(c.to_rational() > 0);
        CHECK(c.to_rational().get_den() == 1);
      }
    }
  }
}

TEST_CASE("lowest coefficients count coset-minimal dual vectors") {
  for (const char* name : {"A1", "A2", "gram4"}) {
    auto L = standard_lattice(name);
    auto dd = discriminant_group(L);
    // scan K° = G^{-1} Z^c directly and record, per coset, the minimal norm and its multiplicity
    std::map<std::size_t, std::pair<Rational, long>> best;
    std::vector<long> k(L.rank, -6);
    for (;;) {
      RatVec x(L.rank, Rational(0));
      for (int i = 0; i < L.rank; ++i)
        for (int j = 0; j < L.rank; ++j) x[i] += dd.gram_inverse[i][j] * Rational(k[j]);
      std::size_t g = dd.coset_of(x);
      Rational n = L.norm(x) / 2;
      auto it = best.find(g);
      if (it == best.end() || n < it->second.first)
        best[g] = {n, 1};
      else if (n == it->second.first)
        ++it->second.second;
      int i = 0;
      while (i < L.rank && ++k[i] > 6) {
        k[i] = -6;
        ++i;
      }
      if (i == L.rank) break;
    }
    long total = 0, expect = 0;
    for (std::size_t g = 0; g < dd.coset_reps.size(); ++g) {
      auto chi = character(L, dd.coset_reps[g], ExpCharacter::trivial(), std::nullopt, Rational(3));
      total += to_long(chi.coefficient(*chi.valuation()).to_rational().get_num());
      expect += best.at(g).second;
    }
    CHECK(total == expect);
  }
}

TEST_CASE("two-variable trace against the weight-space oracle") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> num(-4, 4), den(1, 4);
  for (const char* name : {"A1", "A2"}) {
    auto L = standard_lattice(name);
    auto dd = discriminant_group(L);
    for (int trial = 0; trial < 4; ++trial) {
      RatVec v(L.rank), u(L.rank);
      for (auto& x : v) x = ratio(num(rng), den(rng));
      for (auto& x : u) x = ratio(num(rng), den(rng));
      const auto& beta = dd.coset_reps[trial % dd.coset_reps.size()];
      auto z = two_variable_trace(L, beta, v, u, Rational(3));
      auto o = trace_oracle(L, beta, v, u, Rational(3));
      CHECK(*z.cutoff() == Rational(3));
      CHECK(first_mismatch(z, o) == std::nullopt);
    }
  }
}

TEST_CASE("two-variable trace special cases") {
  auto L = standard_lattice("A2");
  RatVec v{Rational(1, 3), Rational(-1, 2)};
  auto chi_v = character(L, L.zero(), ExpCharacter::rational(v), std::nullopt, Rational(6));
  CHECK(two_variable_trace(L, L.zero(), v, L.zero(), Rational(6)) == chi_v);
  auto chi_0 = character(L, L.zero(), ExpCharacter::trivial(), std::nullopt, Rational(6));
  auto z = two_variable_trace(L, L.zero(), L.zero(), RatVec{1, -1}, Rational(6));
  CHECK(first_mismatch(z, chi_0) == std::nullopt);
}

TEST_CASE("sign symmetries of the two-variable trace") {
  // Z_beta(-v, -u) = Z_{-beta}(v, u), and conjugation flips v alone: conj Z_beta(v, u) = Z_beta(-v, u)
  auto L = standard_lattice("A2");
  auto dd = discriminant_group(L);
  RatVec v{Rational(1, 4), Rational(2, 3)}, u{Rational(-1, 2), Rational(1, 3)};
  RatVec mv{-v[0], -v[1]}, mu{-u[0], -u[1]};
  for (std::size_t g = 0; g < 3; ++g) {
    auto a = two_variable_trace(L, dd.coset_reps[g], v, u, Rational(4));
    RatVec nb = dd.coset_reps[g];
    for (auto& x : nb) x = -x;
    CHECK(first_mismatch(two_variable_trace(L, dd.coset_reps[g], mv, mu, Rational(4)),
                         two_variable_trace(L, nb, v, u, Rational(4))) == std::nullopt);
    CHECK(first_mismatch(a.map([](const CycRat& c) { return c.conj(); }),
                         two_variable_trace(L, dd.coset_reps[g], mv, u, Rational(4))) == std::nullopt);
  }
}

TEST_CASE("quasi-periodicity") {
  auto a1 = standard_lattice("A1");
  CHECK(quasi_periodicity_check(a1, {0}, {Rational(1, 4)}, {1}, Rational(8)).passed());
  CHECK(quasi_periodicity_check(a1, {Rational(1, 2)}, {Rational(1, 4)}, {-2}, Rational(8)).passed());
  CHECK(quasi_periodicity_check(a1, {0}, {Rational(1, 4)}, {0}, Rational(8)).passed());
  CHECK_THROWS_AS(quasi_periodicity_check(a1, {0}, {0}, {Rational(1, 2)}, Rational(4)), PreconditionFailed);

  auto e8 = standard_lattice("E8");
  RatVec root = e8.basis_vector(3);
  auto rep = quasi_periodicity_check(e8, e8.zero(), e8.zero(), root, Rational(6));
  CHECK(rep.passed());
  CHECK(rep.items().at(0).detail == "window q^6");
}

TEST_CASE("a dual but non-lattice shift breaks quasi-periodicity") {
  // with alpha in K° \ K the shifted sum runs over another coset
  auto L = standard_lattice("A1");
  RatVec h{Rational(1, 3)}, alpha{Rational(1, 2)};
  const Rational half = L.norm(alpha) / 2;
  auto lhs = character(L, {0}, ExpCharacter::rational(h), alpha, Rational(4));
  auto rhs = character(L, {0}, ExpCharacter::rational(h), std::nullopt, Rational(4) + half)
                 .q_shifted(-half)
                 .scaled(root_of_unity(-L.pair(h, alpha)));
  CHECK(first_mismatch(lhs, rhs).has_value());
}

TEST_CASE("elliptic invariance") {
  auto a1 = standard_lattice("A1");
  CHECK(elliptic_invariance_check(a1, {0}, {Rational(1, 4)}, {Rational(1, 2)}, Rational(6)).passed());
  CHECK(elliptic_invariance_check(a1, {0}, {Rational(1, 4)}, {0}, Rational(6)).passed());
  CHECK(elliptic_invariance_check(a1, {Rational(1, 2)}, {Rational(1, 5)}, {1}, Rational(6)).passed());
  CHECK_THROWS_AS(elliptic_invariance_check(a1, {Rational(1, 2)}, {0}, {Rational(1, 2)}, Rational(6)),
                  PreconditionFailed);
  CHECK_THROWS_AS(elliptic_invariance_check(a1, {0}, {0}, {Rational(1, 3)}, Rational(6)), PreconditionFailed);
}

TEST_CASE("T-transformation") {
  auto a1 = t_transformation_check(standard_lattice("A1"), Rational(8));
  CHECK(a1.passed());
  CHECK(a1.items().size() == 2);
  CHECK(a1.items()[1].name == "coset 1: phase e^{2 pi i (5/24)}");
  auto e8 = t_transformation_check(standard_lattice("E8"), Rational(4));
  CHECK(e8.passed());
  CHECK(e8.items().at(0).name == "coset 0: phase e^{2 pi i (2/3)}");
  auto r0 = t_transformation_check(validate({}), Rational(4));
  CHECK(r0.passed());
  CHECK(r0.items().at(0).name == "coset 0: phase e^{2 pi i (0)}");
  CHECK(t_transformation_check(standard_lattice("A2"), Rational(6), {Rational(1, 3), Rational(1, 7)}).passed());
}

TEST_CASE("Zhu coefficients") {
  auto t = zhu_coefficients(12, 12);
  CHECK(t.at(1, 2, 1) == Rational(-1, 2));
  CHECK(zhu_checks(12, 12).passed());
  CHECK_THROWS_AS(t.at(13, 0, 0), std::out_of_range);
  CHECK_THROWS_AS(t.at(2, 1, 2), std::out_of_range);

  // Stirling numbers: log(1+z)^m = m! sum_n s(n,m) z^n / n!
  const int n = 8;
  auto s = stirling_first(n);
  for (int k = 0; k <= n; ++k)
    for (int m = 0; m <= n; ++m)
      for (int i = m; i <= n; ++i) {
        Rational acc = 0;
        Rational mfact = 1;
        for (int j = 2; j <= m; ++j) mfact *= j;
        for (int j = m; j <= i; ++j) {
          Rational jfact = 1;
          for (int r = 2; r <= j; ++r) jfact *= r;
          acc += mfact * s[j][m] / jfact * Rational(binomial(k - 1, i - j));
        }
        CHECK(t.at(k, i, m) == acc);
      }

  // derivative recursion: i c(k,i,m) = m c(k-1,i-1,m-1) + (k-1) c(k-1,i-1,m)
  for (int k = 1; k <= 12; ++k)
    for (int m = 1; m <= 12; ++m)
      for (int i = m; i <= 12; ++i) {
        Rational rhs = m * t.at(k - 1, i - 1, m - 1);
        if (i - 1 >= m) rhs += (k - 1) * t.at(k - 1, i - 1, m);
        CHECK(i * t.at(k, i, m) == rhs);
      }
}
