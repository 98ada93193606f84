#pragma once

// Numerical checks of the modular laws that exact series arithmetic cannot
// reach: theta and character S-transformations, the Jacobi-form law of the
// genus, and the winding count of F along a period parallelogram.

#include "rlab/genus.hpp"
#include "rlab/numeric.hpp"

#include <functional>

namespace rlab {

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using CMatrix = std::vector<std::vector<cplx>>;

/// sum_{g in K + beta} e^{2 pi i (h, g)} q^{(g,g)/2}, summed until the terms drop below 1e-19.
cplx lattice_theta_value(const EvenLattice& L, const RatVec& beta, const std::vector<cplx>& h, cplx tau);

/// theta_{K+beta}(h, tau) / eta(tau)^c.
cplx character_value(const EvenLattice& L, const RatVec& beta, const std::vector<cplx>& h, cplx tau);

/// theta(t/tau, -1/tau) = -i sqrt(tau/i) e^{pi i t^2/tau} theta(t, tau), principal branch of the root.
/// Both sides come from the q-expansion of theta to q^order.
Report theta_S_check(cplx t, cplx tau, double tol, int order = 40);

/// S_{g,h} = |K°/K|^{-1/2} e^{-2 pi i (beta_g, beta_h)}.
CMatrix poisson_S_matrix(const EvenLattice& L);

struct SMatrixResult {
  CMatrix S;  // chi_g(v/tau, -1/tau) = e^{pi i (v,v)/tau} sum_h S_{g,h} chi_h(v, tau)
  Report report;
};

/// Recovers S by least squares from evaluations at |K°/K| + 3 sample vectors v.
SMatrixResult character_S_matrix(const EvenLattice& L, cplx tau, double tol, unsigned seed = 1);

/// sign * integral of the fixed-point integrand of one component, with floating-point theta.
/// `module` replaces the model's module.
cplx component_value_direct(const FixedPointModel& model, std::size_t component,
                            const std::map<std::size_t, Rational>& module, cplx t, cplx tau);
cplx genus_value_direct(const FixedPointModel& model, const std::map<std::size_t, Rational>& module, cplx t, cplx tau);

struct SL2 {
  long a = 1, b = 0, c = 0, d = 1;
};

/// F_M(A(t, tau)) = (c tau + d)^k e^{pi i l c t^2/(c tau + d)} F_{rho(A) M}(t, tau). The left side is the
/// exact engine's series, the right side the direct evaluation in each coset module.
Report jacobi_form_check(const FixedPointModel& model, const SL2& A, const std::vector<std::pair<cplx, cplx>>& points,
                         double tol, int order = 30);

/// Winding of f along the closed polygon, as a real number (adaptive in the argument steps).
double winding_along(const std::function<cplx(cplx)>& f, const std::vector<cplx>& polygon, int samples);

/// Rounded winding; throws NumericError when the contour passes near a zero of f.
long winding_count(const std::function<cplx(cplx)>& f, const std::vector<cplx>& polygon, int samples,
                   double tol = 1e-8);

/// Number of zeros of F(., tau) in the parallelogram with corner base + 0.071 tau and sides 2 and 2 tau.
long winding_number(const GenusSeries& gs, cplx tau, int samples, cplx base = cplx(0.137, 0.0));

}  // namespace rlab
