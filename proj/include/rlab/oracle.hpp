#pragma once

// Independent routes to the elliptic genus of a model with isolated fixed
// points. Neither uses the theta or genus code: each point contributes its
// Dirac term times the Sym_{q^n} expansion of the tangent weights and the
// lattice module expanded vector by vector.

#include "rlab/genus.hpp"

namespace rlab {

/// sum_P sign * prod_gamma (z^{m/2} - z^{-m/2})^{-d} * prod_n Sym_{q^n}(T_P - dim) * psi(M)|_P,
/// complete to q^order. Throws PreconditionFailed for non-isolated components.
QSeries<RationalZ> bundle_expansion_oracle(const FixedPointModel& model, const Rational& order);

/// Lowest-order term of the genus: sum_P sign * prod (z^{m/2} - z^{-m/2})^{-d} * sum_{g minimal} w z^{(T_P, g)},
/// together with its q-exponent (minimal norm / 2 - c/24).
std::pair<Rational, RationalZ> weight_sum_oracle(const FixedPointModel& model);

}  // namespace rlab
