#include "rlab/oracle.hpp"

namespace rlab {

namespace {

using Terms = std::map<Rational, LaurentZ>;

void add_to(Terms& s, const Rational& e, const LaurentZ& c, const Rational& limit) {
  if (e > limit || c.is_zero()) return;
  auto [it, inserted] = s.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) s.erase(it);
  }
}

Terms multiply(const Terms& a, const Terms& b, const Rational& limit) {
  Terms out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) add_to(out, ea + eb, ca * cb, limit);
  return out;
}

LaurentZ zpow(const Rational& e) { return LaurentZ::z_pow(e); }

/// 1 / (z^{m/2} - z^{-m/2})^d.
RationalZ dirac(int m, long d) {
  LaurentZ den(1L);
  LaurentZ w = zpow(ratio(m, 2)) - zpow(ratio(-m, 2));
  for (long j = 0; j < d; ++j) den = den * w;
  return RationalZ(LaurentZ(1L), den);
}

/// Number of c-coloured partitions of n, by the recursion over part sizes.
std::vector<Integer> coloured_partitions(int c, long n_max) {
  std::vector<Integer> p(static_cast<std::size_t>(n_max) + 1, 0);
  p[0] = 1;
  for (int colour = 0; colour < c; ++colour)
    for (long part = 1; part <= n_max; ++part)
      for (long n = part; n <= n_max; ++n) p[n] += p[n - part];
  return p;
}

void require_isolated(const FixedPointModel& model) {
  if (!model.isolated()) throw PreconditionFailed("the oracle handles isolated fixed points only");
}

}  // namespace

QSeries<RationalZ> bundle_expansion_oracle(const FixedPointModel& model, const Rational& order) {
  require_isolated(model);
  const EvenLattice& L = model.lattice;
  const Rational shift = ratio(L.rank, 24);
  const Rational top = order + shift;
  auto dd = discriminant_group(L);
  auto fock = coloured_partitions(L.rank, to_long(floor_of(top)));

  QSeries<RationalZ> out(1, order);
  for (const auto& comp : model.components) {
    Terms sym{{Rational(0), LaurentZ(1L)}};
    for (long n = 1; n <= top; ++n) {
      for (const auto& ns : comp.normals) {
        for (std::size_t j = 0; j < ns.roots.size(); ++j) {
          // (1 - q^n)^2 / ((1 - q^n z^m)(1 - q^n z^{-m}))
          Terms f;
          for (long a = 0; a * n <= top; ++a)
            for (long b = 0; (a + b) * n <= top; ++b) add_to(f, Rational(n * (a + b)), zpow(Rational(ns.m * (a - b))), top);
          Terms g{{Rational(0), LaurentZ(1L)}};
          add_to(g, Rational(n), LaurentZ(-2L), top);
          add_to(g, Rational(2 * n), LaurentZ(1L), top);
          sym = multiply(multiply(sym, f, top), g, top);
        }
      }
    }
    Terms psi;
    for (const auto& [g, w] : model.module) {
      for (const RatVec& v : enumerate(L, dd.coset_reps.at(g), top)) {
        Rational e = L.norm(v) / 2;
        for (long n = 0; e + n <= top; ++n)
          add_to(psi, e + n, zpow(L.pair(comp.T, v)) * (w * Rational(fock[static_cast<std::size_t>(n)])), top);
      }
    }
    RationalZ pre(comp.sign);
    for (const auto& ns : comp.normals) pre = pre * dirac(ns.m, static_cast<long>(ns.roots.size()));
    for (const auto& [e, c] : multiply(sym, psi, top)) out.add_term(e - shift, pre * RationalZ(c));
  }
  return out;
}

std::pair<Rational, RationalZ> weight_sum_oracle(const FixedPointModel& model) {
  require_isolated(model);
  const EvenLattice& L = model.lattice;
  auto dd = discriminant_group(L);
  std::optional<Rational> lowest;
  for (const auto& [g, w] : model.module) {
    const RatVec& beta = dd.coset_reps.at(g);
    Rational bound = L.norm(beta) / 2;
    for (const RatVec& v : enumerate(L, beta, bound)) {
      Rational e = L.norm(v) / 2;
      if (!lowest || e < *lowest) lowest = e;
    }
  }
  RationalZ total(0L);
  for (const auto& comp : model.components) {
    LaurentZ weights;
    for (const auto& [g, w] : model.module)
      for (const RatVec& v : enumerate(L, dd.coset_reps.at(g), *lowest))
        weights += zpow(L.pair(comp.T, v)) * w;
    RationalZ term(comp.sign);
    for (const auto& ns : comp.normals) term = term * dirac(ns.m, static_cast<long>(ns.roots.size()));
    total += term * RationalZ(weights);
  }
  return {*lowest - ratio(L.rank, 24), total};
}

}  // namespace rlab
