#pragma once

// Equivariant elliptic genus F_{M,P}(t, tau) from fixed-point data.
//
// All classes are stored as the actual Chern roots c = 2 pi i y, so every
// coefficient stays in Q(zeta_N)(z^{1/2}). A component contributes
//
//   sign * integral prod_j c_j R(c_j) prod_{gamma,l} R(x_gamma^l + m_gamma t) chi_M(U + T t)
//
// with R(v) = theta'(0) / (2 pi i theta(v)) and chi_M = theta_M / eta^c.

#include "rlab/characters.hpp"
#include "rlab/lattice.hpp"
#include "rlab/nilpotent.hpp"
#include "rlab/qseries.hpp"
#include "rlab/rational_function.hpp"
#include "rlab/report.hpp"
#include "rlab/theta.hpp"

#include <map>
#include <string>
#include <vector>

namespace rlab {

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class AnomalyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NormalSummand {
  int m = 0;
  std::vector<Nilpotent<Rational>> roots;  // d_gamma of them
};

struct FixedComponent {
  std::string label;
  NilModelPtr cohomology;
  std::vector<Nilpotent<Rational>> tangent_roots;
  std::vector<NormalSummand> normals;
  RatVec T;
  std::vector<Nilpotent<Rational>> U;  // coefficient of each lattice basis vector
  int sign = 1;

  bool isolated() const { return tangent_roots.empty(); }
  int dimension() const;  // k_alpha + sum d_gamma
};

struct FixedPointModel {
  std::string name;
  std::string description;
  bool geometric = true;
  EvenLattice lattice;
  std::map<std::size_t, Rational> module;  // coset index -> weight
  int half_dim = 0;
  std::vector<FixedComponent> components;

  bool isolated() const;
};

FixedPointModel model_from_json_text(const std::string& text, const std::string& base_dir = ".");
FixedPointModel load_model(const std::string& path);

/// Verifies the three anomaly identities at every component and returns l.
long anomaly_check(const FixedPointModel& model);

/// Lattice part of a component: theta_M(U + T t) with theta_M = sum_g w_g theta_{K+beta_g}.
/// With tau_shift = a the argument becomes U + T (t + a tau).
QSeries<Nilpotent<LaurentZ>> module_theta(const FixedPointModel& model, const FixedComponent& comp,
                                          const Rational& cutoff, long tau_shift = 0);

/// The integrand of one component before integration, in factored form.
FactoredSeries local_contribution(const FixedPointModel& model, std::size_t component, const Rational& cutoff);

/// sign * integral of a factored local contribution, coefficientwise.
QSeries<RationalZ> integrate_contribution(const FactoredSeries& f, int sign);

struct GenusSeries {
  QSeries<RationalZ> raw;                   // sum of integrated contributions
  std::optional<QSeries<LaurentZ>> reduced;  // present iff every coefficient reduced
  std::vector<std::pair<Rational, LaurentZ>> failures;  // exponent, residual denominator
  long l = 0;

  bool reduced_ok() const { return reduced.has_value(); }
};

GenusSeries elliptic_genus(const FixedPointModel& model, const Rational& cutoff);

/// Reduces every coefficient of a summed series.
GenusSeries reduce_series(const QSeries<RationalZ>& raw, long l);

/// Pole cancellation verdict plus one line per q-coefficient: constant in z or not.
Report rigidity_report(const GenusSeries& gs);

/// F(t + a tau) = q^{-l a^2/2} z^{-l a} F(t). The left side is recomputed from the
/// fixed-point data at t + a tau, so both sides are exact on the whole window.
/// Throws PreconditionFailed unless the module is invariant under translation by a T.
Report shift_law_check(const FixedPointModel& model, long a, const Rational& cutoff);

/// Text form of a genus series: one coefficient per line.
std::string genus_text(const GenusSeries& gs);

}  // namespace rlab
