#pragma once

// Characters of the lattice vertex operator algebra V_K and its modules
// V_{K+beta}: chi(h, tau) = theta_{K+beta}(h, tau) / eta^c, plus the
// two-variable trace and the Zhu bracket coefficients.

#include "rlab/lattice.hpp"
#include "rlab/report.hpp"

#include <map>
#include <tuple>

namespace rlab {

class PreconditionFailed : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// eta(q)^k over CycRat (k may be negative): q^{k/24} prod (1 - q^n)^k.
QSeries<CycRat> eta_power(long k, const Rational& cutoff);

/// Minimal (g, g)/2 over the coset K + beta.
Rational coset_min_norm(const EvenLattice& L, const RatVec& beta);

/// theta / eta^c, exact to q^cutoff.
QSeries<CycRat> character(const EvenLattice& L, const RatVec& coset_rep, const ExpCharacter& phase,
                          const std::optional<RatVec>& tau_shift, const Rational& cutoff);

/// e^{pi i (u,v)} eta^{-c} sum_{g in K+beta} e^{2 pi i (v,g)} q^{(g+u, g+u)/2}.
QSeries<CycRat> two_variable_trace(const EvenLattice& L, const RatVec& coset_rep, const RatVec& v, const RatVec& u,
                                   const Rational& cutoff);

/// chi(h + alpha tau) against e^{-2 pi i (h,alpha)} q^{-(alpha,alpha)/2} chi(h), alpha in K.
Report quasi_periodicity_check(const EvenLattice& L, const RatVec& coset_rep, const RatVec& h, const RatVec& alpha,
                               const Rational& cutoff);

/// chi(h + alpha) = chi(h); throws PreconditionFailed unless (alpha, K + beta) is integral.
Report elliptic_invariance_check(const EvenLattice& L, const RatVec& coset_rep, const RatVec& h, const RatVec& alpha,
                                 const Rational& cutoff);

/// chi(h, tau + 1) = e^{2 pi i (lambda - c/24)} chi(h, tau) for every coset.
Report t_transformation_check(const EvenLattice& L, const Rational& cutoff, const RatVec& h = {});

/// c(k, i, m) = [z^i] (log(1 + z))^m (1 + z)^{k - 1}, 0 <= k <= k_max, m <= i <= i_max.
class ZhuTable {
 public:
  ZhuTable(int k_max, int i_max);
  int k_max() const { return k_max_; }
  int i_max() const { return i_max_; }
  const Rational& at(int k, int i, int m) const;
  const std::map<std::tuple<int, int, int>, Rational>& entries() const { return table_; }

 private:
  int k_max_, i_max_;
  std::map<std::tuple<int, int, int>, Rational> table_;
};

ZhuTable zhu_coefficients(int k_max, int i_max);

/// c(k, m, m) = 1 and c(k, i, 0) = binomial(k - 1, i) over the whole table.
Report zhu_checks(int k_max, int i_max);

}  // namespace rlab
