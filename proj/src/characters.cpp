#include "rlab/characters.hpp"

#include "rlab/theta.hpp"

namespace rlab {

namespace {

bool all_zero(const RatVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

ExpCharacter phase_of(const RatVec& h) {
  return all_zero(h) ? ExpCharacter::trivial() : ExpCharacter::rational(h);
}

/// theta (known to q^{cutoff + c/24}) times eta^{-c}, exact to q^cutoff.
QSeries<CycRat> over_eta(const QSeries<CycRat>& theta, int c, const Rational& cutoff) {
  if (c == 0) return theta.truncated(cutoff);
  Rational v = theta.valuation().value_or(cutoff);
  auto eta_inv = eta_power(-c, cutoff - std::min(v, cutoff));
  return (theta * eta_inv).truncated(cutoff);
}

std::string window_text(const Cutoff& w) { return "window q^" + (w ? to_string(*w) : std::string("inf")); }

void compare_into(Report& rep, const std::string& name, const QSeries<CycRat>& lhs, const QSeries<CycRat>& rhs) {
  auto bad = first_mismatch(lhs, rhs);
  Cutoff w = min_cutoff(lhs.cutoff(), rhs.cutoff());
  if (bad)
    rep.add(name, false,
            "mismatch at q^" + to_string(*bad) + ": " + lhs.coefficient(*bad).str() + " vs " + rhs.coefficient(*bad).str());
  else
    rep.add(name, true, window_text(w));
}

void require_lattice_vector(const EvenLattice& L, const RatVec& alpha) {
  if (static_cast<int>(alpha.size()) != L.rank) throw std::invalid_argument("alpha has the wrong number of coordinates");
  for (const auto& x : alpha)
    if (x.get_den() != 1) throw PreconditionFailed("alpha = " + to_string(alpha) + " is not a vector of K");
}

}  // namespace

QSeries<CycRat> eta_power(long k, const Rational& cutoff) {
  const Rational shift = ratio(k, 24);
  auto p = euler_product_power(k, cutoff - shift).q_shifted(shift);
  return p.map([](const Rational& r) { return CycRat(r); });
}

Rational coset_min_norm(const EvenLattice& L, const RatVec& beta) {
  auto pts = enumerate(L, beta, L.norm(beta) / 2);
  Rational best = L.norm(beta) / 2;
  for (const auto& p : pts) best = std::min(best, Rational(L.norm(p) / 2));
  return best;
}

QSeries<CycRat> character(const EvenLattice& L, const RatVec& coset_rep, const ExpCharacter& phase,
                          const std::optional<RatVec>& tau_shift, const Rational& cutoff) {
  const Rational shift = ratio(L.rank, 24);
  auto theta = theta_series(L, coset_rep, phase, tau_shift, cutoff + shift);
  return over_eta(theta, L.rank, cutoff);
}

QSeries<CycRat> two_variable_trace(const EvenLattice& L, const RatVec& coset_rep, const RatVec& v, const RatVec& u,
                                   const Rational& cutoff) {
  const Rational shift = ratio(L.rank, 24);
  const Rational half_u = L.norm(u) / 2;
  // sum e^{2 pi i (v,g)} q^{(g+u)^2/2} = q^{(u,u)/2} theta(v + u tau)
  auto theta = theta_series(L, coset_rep, phase_of(v), u, cutoff + shift - half_u).q_shifted(half_u);
  return over_eta(theta, L.rank, cutoff).scaled(root_of_unity(L.pair(u, v) / 2));
}

Report quasi_periodicity_check(const EvenLattice& L, const RatVec& coset_rep, const RatVec& h, const RatVec& alpha,
                               const Rational& cutoff) {
  require_lattice_vector(L, alpha);
  Report rep("quasi-periodicity " + (L.name.empty() ? std::string("K") : L.name) + " beta=(" + to_string(coset_rep) +
             ") h=(" + to_string(h) + ") alpha=(" + to_string(alpha) + ")");
  const Rational half = L.norm(alpha) / 2;
  auto lhs = character(L, coset_rep, phase_of(h), alpha, cutoff);
  auto rhs = character(L, coset_rep, phase_of(h), std::nullopt, cutoff + half)
                 .q_shifted(-half)
                 .scaled(root_of_unity(-L.pair(h, alpha)));
  compare_into(rep, "chi(h + alpha tau) = e^{-2 pi i (h,alpha)} q^{-(alpha,alpha)/2} chi(h)", lhs, rhs);
  return rep;
}

Report elliptic_invariance_check(const EvenLattice& L, const RatVec& coset_rep, const RatVec& h, const RatVec& alpha,
                                 const Rational& cutoff) {
  if (static_cast<int>(alpha.size()) != L.rank) throw std::invalid_argument("alpha has the wrong number of coordinates");
  for (int i = 0; i < L.rank; ++i)
    if (L.pair(alpha, L.basis_vector(i)).get_den() != 1)
      throw PreconditionFailed("(alpha, K) is not integral for alpha = " + to_string(alpha));
  if (L.pair(alpha, coset_rep).get_den() != 1)
    throw PreconditionFailed("(alpha, K + beta) is not integral: (alpha, beta) = " + to_string(L.pair(alpha, coset_rep)));
  Report rep("elliptic invariance beta=(" + to_string(coset_rep) + ") alpha=(" + to_string(alpha) + ")");
  RatVec shifted = h;
  if (shifted.empty()) shifted = L.zero();
  RatVec base = shifted;
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += alpha[i];
  compare_into(rep, "chi(h + alpha) = chi(h)", character(L, coset_rep, phase_of(shifted), std::nullopt, cutoff),
               character(L, coset_rep, phase_of(base), std::nullopt, cutoff));
  return rep;
}

Report t_transformation_check(const EvenLattice& L, const Rational& cutoff, const RatVec& h) {
  Report rep("T-transformation of characters of " + (L.name.empty() ? std::string("K") : L.name));
  const RatVec hv = h.empty() ? L.zero() : h;
  auto dd = discriminant_group(L);
  for (std::size_t g = 0; g < dd.coset_reps.size(); ++g) {
    const auto& beta = dd.coset_reps[g];
    auto chi = character(L, beta, phase_of(hv), std::nullopt, cutoff);
    Rational expo = coset_min_norm(L, beta) - ratio(L.rank, 24);
    auto lhs = chi.map_indexed([](const Rational& e, const CycRat& c) { return c * root_of_unity(e); });
    auto rhs = chi.scaled(root_of_unity(expo));
    compare_into(rep, "coset " + std::to_string(g) + ": phase e^{2 pi i (" + to_string(frac_part(expo)) + ")}", lhs,
                 rhs);
  }
  return rep;
}

ZhuTable::ZhuTable(int k_max, int i_max) : k_max_(k_max), i_max_(i_max) {
  if (k_max < 0 || i_max < 0) throw std::invalid_argument("k_max and i_max must be nonnegative");
  const std::size_t n = static_cast<std::size_t>(i_max) + 1;
  using Poly = std::vector<Rational>;
  auto mul = [&](const Poly& a, const Poly& b) {
    Poly c(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; i + j < n; ++j) c[i + j] += a[i] * b[j];
    }
    return c;
  };
  Poly log1p(n, Rational(0));
  for (std::size_t j = 1; j < n; ++j) log1p[j] = ratio(j % 2 == 1 ? 1 : -1, static_cast<long>(j));
  std::vector<Poly> log_pow(n);
  log_pow[0] = Poly(n, Rational(0));
  log_pow[0][0] = 1;
  for (std::size_t m = 1; m < n; ++m) log_pow[m] = mul(log_pow[m - 1], log1p);
  for (int k = 0; k <= k_max; ++k) {
    Poly binom(n, Rational(0));  // (1 + z)^{k-1}
    binom[0] = 1;
    for (std::size_t j = 1; j < n; ++j) binom[j] = binom[j - 1] * ratio(k - static_cast<long>(j), static_cast<long>(j));
    for (std::size_t m = 0; m < n; ++m) {
      Poly p = mul(log_pow[m], binom);
      for (std::size_t i = m; i < n; ++i)
        table_[{k, static_cast<int>(i), static_cast<int>(m)}] = p[i];
    }
  }
}

const Rational& ZhuTable::at(int k, int i, int m) const {
  auto it = table_.find({k, i, m});
  if (it == table_.end())
    throw std::out_of_range("c(" + std::to_string(k) + "," + std::to_string(i) + "," + std::to_string(m) +
                            ") is outside the table");
  return it->second;
}

ZhuTable zhu_coefficients(int k_max, int i_max) { return ZhuTable(k_max, i_max); }

Report zhu_checks(int k_max, int i_max) {
  Report rep("Zhu coefficients k <= " + std::to_string(k_max) + ", i <= " + std::to_string(i_max));
  ZhuTable t(k_max, i_max);
  std::string diag_bad, binom_bad;
  long diag_n = 0, binom_n = 0;
  for (int k = 0; k <= k_max; ++k) {
    for (int m = 0; m <= i_max; ++m) {
      ++diag_n;
      if (t.at(k, m, m) != 1 && diag_bad.empty())
        diag_bad = "c(" + std::to_string(k) + "," + std::to_string(m) + "," + std::to_string(m) + ") = " +
                   to_string(t.at(k, m, m));
    }
    for (int i = 0; i <= i_max; ++i) {
      ++binom_n;
      Integer b;
      mpz_bin_ui(b.get_mpz_t(), Integer(k - 1).get_mpz_t(), static_cast<unsigned long>(i));
      if (t.at(k, i, 0) != Rational(b) && binom_bad.empty())
        binom_bad = "c(" + std::to_string(k) + "," + std::to_string(i) + ",0) = " + to_string(t.at(k, i, 0)) +
                    ", binomial = " + b.get_str();
    }
  }
  rep.add("c(k,m,m) = 1", diag_bad.empty(), diag_bad.empty() ? std::to_string(diag_n) + " entries" : diag_bad);
  rep.add("c(k,i,0) = binomial(k-1,i)", binom_bad.empty(),
          binom_bad.empty() ? std::to_string(binom_n) + " entries" : binom_bad);
  return rep;
}

}  // namespace rlab
