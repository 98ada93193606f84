#include "rlab/numeric_checks.hpp"

#include "rlab/theta.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <sstream>

namespace rlab {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
const cplx kI(0.0, 1.0);

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

std::string fmt(cplx z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

void check_tau(cplx tau) {
  if (!(tau.imag() > 0.0)) throw std::domain_error("tau must lie in the upper half plane (|q| < 1)");
}

std::vector<std::vector<double>> gram_double(const EvenLattice& L) {
  std::vector<std::vector<double>> g(L.rank, std::vector<double>(L.rank));
  for (int i = 0; i < L.rank; ++i)
    for (int j = 0; j < L.rank; ++j) g[i][j] = static_cast<double>(L.gram[i][j]);
  return g;
}

/// Calls f(G g as doubles, (g,g)/2) for every g in K + beta that can contribute more than e^{-45}
/// to a sum of e^{2 pi i (h, g)} q^{(g,g)/2} with |Im h| = a in the lattice norm.
template <class F>
void lattice_points(const EvenLattice& L, const RatVec& beta, double im_tau, double a, F&& f) {
  double n = std::max(1.0, a * a / (2.0 * im_tau * im_tau));
  while (im_tau * n - a * std::sqrt(2.0 * n) < 45.0 / kTwoPi) n += 0.5;
  const auto g = gram_double(L);
  const long scale = common_denominator(beta);
  std::vector<double> gg(static_cast<std::size_t>(L.rank));
  for_each_point(L, beta, Rational(static_cast<long>(std::ceil(n))), [&](const std::vector<long>& y) {
    double norm = 0.0;
    for (int i = 0; i < L.rank; ++i) {
      double s = 0.0;
      for (int j = 0; j < L.rank; ++j) s += g[i][j] * static_cast<double>(y[j]);
      gg[i] = s / static_cast<double>(scale);
      norm += gg[i] * static_cast<double>(y[i]) / static_cast<double>(scale);
    }
    f(gg, norm / 2.0);
  });
}

double imag_norm(const EvenLattice& L, const std::vector<cplx>& h) {
  const auto g = gram_double(L);
  double s = 0.0;
  for (int i = 0; i < L.rank; ++i)
    for (int j = 0; j < L.rank; ++j) s += g[i][j] * h[i].imag() * h[j].imag();
  return std::sqrt(std::max(0.0, s));
}

cplx pair_h(const std::vector<cplx>& h, const std::vector<double>& gg) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) s += h[i] * gg[i];
  return s;
}

Nilpotent<cplx> to_cplx(const Nilpotent<Rational>& x) {
  return x.map([](const Rational& r) { return cplx(r.get_d(), 0.0); });
}


using Word = std::vector<std::pair<char, long>>;

/// A as a product of T^n and S factors, left to right.
Word sl2_word(SL2 A) {
  if (A.a * A.d - A.b * A.c != 1) throw std::invalid_argument("matrix is not in SL2(Z)");
  Word w;
  long a = A.a, b = A.b, c = A.c, d = A.d;
  while (c != 0) {
    long n = std::lround(static_cast<double>(a) / static_cast<double>(c));
    a -= n * c;
    b -= n * d;
    w.emplace_back('T', n);
    w.emplace_back('S', 0);
    long na = c, nb = d;
    c = -a;
    d = -b;
    a = na;
    b = nb;
  }
  if (a == 1) {
    w.emplace_back('T', b);
  } else {
    w.emplace_back('S', 0);
    w.emplace_back('S', 0);
    w.emplace_back('T', -b);
  }
  return w;
}

CMatrix identity(std::size_t n) {
  CMatrix m(n, std::vector<cplx>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

CMatrix matmul(const CMatrix& x, const CMatrix& y) {
  const std::size_t n = x.size();
  CMatrix out(n, std::vector<cplx>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) out[i][j] += x[i][k] * y[k][j];
  return out;
}

}  // namespace

cplx lattice_theta_value(const EvenLattice& L, const RatVec& beta, const std::vector<cplx>& h, cplx tau) {
  check_tau(tau);
  if (static_cast<int>(h.size()) != L.rank) throw std::invalid_argument("h has the wrong rank");
  cplx acc = 0.0;
  lattice_points(L, beta, tau.imag(), imag_norm(L, h), [&](const std::vector<double>& gg, double half_norm) {
    acc += std::exp(kTwoPi * kI * (pair_h(h, gg) + tau * half_norm));
  });
  return acc;
}

cplx character_value(const EvenLattice& L, const RatVec& beta, const std::vector<cplx>& h, cplx tau) {
  return lattice_theta_value(L, beta, h, tau) / std::pow(eta_value(tau), L.rank);
}

Report theta_S_check(cplx t, cplx tau, double tol, int order) {
  check_tau(tau);
  Report rep("theta S-transformation at t = " + fmt(t) + ", tau = " + fmt(tau) + ", order " + std::to_string(order));
  const QSeries<LaurentZ> th = jacobi_theta(Rational(order));
  const cplx tau2 = -1.0 / tau;
  EvalResult lhs = eval(th, tau2, t / tau);
  EvalResult rhs0 = eval(th, tau, t);
  const cplx factor = -kI * std::sqrt(tau / kI) * std::exp(M_PI * kI * t * t / tau);
  const cplx rhs = factor * rhs0.value;
  const double tail = lhs.tail_bound + std::abs(factor) * rhs0.tail_bound;
  const double scale = std::max(std::abs(lhs.value), std::abs(rhs));
  const double err = std::abs(lhs.value - rhs);
  std::string detail = "|lhs - rhs| = " + fmt(err) + ", relative " + fmt(scale > 0 ? err / scale : 0.0) +
                       ", tail bound " + fmt(tail);
  bool ok = scale < 1e-300 || err <= tol * scale + tail;
  rep.add("theta(t/tau, -1/tau) = -i sqrt(tau/i) e^{pi i t^2/tau} theta(t, tau)", ok, detail);
  return rep;
}

CMatrix poisson_S_matrix(const EvenLattice& L) {
  auto dd = discriminant_group(L);
  const std::size_t n = dd.coset_reps.size();
  const double norm = 1.0 / std::sqrt(static_cast<double>(dd.group_order));
  CMatrix S(n, std::vector<cplx>(n));
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) {
      double ph = frac_part(L.pair(dd.coset_reps[g], dd.coset_reps[h])).get_d();
      S[g][h] = norm * std::exp(-kTwoPi * kI * ph);
    }
  return S;
}

SMatrixResult character_S_matrix(const EvenLattice& L, cplx tau, double tol, unsigned seed) {
  check_tau(tau);
  auto dd = discriminant_group(L);
  const std::size_t n = dd.coset_reps.size();
  const std::size_t samples = n + 3;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-0.4, 0.4);

  Eigen::MatrixXcd A(samples, n), B(samples, n);
  for (std::size_t p = 0; p < samples; ++p) {
    std::vector<cplx> v(static_cast<std::size_t>(L.rank)), vt(v.size());
    for (auto& x : v) x = u(rng);
    for (std::size_t i = 0; i < v.size(); ++i) vt[i] = v[i] / tau;
    double vv = 0.0;
    for (int i = 0; i < L.rank; ++i)
      for (int j = 0; j < L.rank; ++j) vv += static_cast<double>(L.gram[i][j]) * v[i].real() * v[j].real();
    const cplx pre = std::exp(M_PI * kI * vv / tau);
    for (std::size_t h = 0; h < n; ++h) {
      A(p, h) = pre * character_value(L, dd.coset_reps[h], v, tau);
      B(p, h) = character_value(L, dd.coset_reps[h], vt, -1.0 / tau);
    }
  }

  Report rep("character S-matrix of " + (L.name.empty() ? std::string("lattice") : L.name) + " (" +
             std::to_string(n) + " cosets)");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (!(cond < 1e10)) throw NumericError("ill-conditioned S-matrix solve (condition number " + fmt(cond) + ")");
  Eigen::MatrixXcd X = svd.solve(B);  // X(h, g) = S_{g,h}
  const double residual = (A * X - B).norm() / B.norm();
  rep.add("least-squares residual", residual < tol, fmt(residual) + ", condition " + fmt(cond));

  SMatrixResult out;
  out.S.assign(n, std::vector<cplx>(n));
  Eigen::MatrixXcd S(n, n);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) S(g, h) = out.S[g][h] = X(h, g);
  const double sym = (S - S.transpose()).cwiseAbs().maxCoeff();
  rep.add("symmetric", sym < tol, "max |S - S^T| = " + fmt(sym));
  const double unit = (S * S.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  rep.add("unitary", unit < tol, "max |S S^* - 1| = " + fmt(unit));
  const CMatrix P = poisson_S_matrix(L);
  double diff = 0.0;
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) diff = std::max(diff, std::abs(S(g, h) - P[g][h]));
  rep.add("Poisson prediction |D|^{-1/2} e^{-2 pi i (beta_g, beta_h)}", diff < tol, "max difference " + fmt(diff));
  out.report = std::move(rep);
  return out;
}

cplx component_value_direct(const FixedPointModel& model, std::size_t component,
                            const std::map<std::size_t, Rational>& module, cplx t, cplx tau) {
  check_tau(tau);
  const FixedComponent& comp = model.components.at(component);
  const EvenLattice& L = model.lattice;
  const NilModelPtr& m = comp.cohomology;
  const int top = m ? m->max_degree() : 0;
  const cplx two_pi_i = kTwoPi * kI;
  const cplx thp = theta_derivative(0.0, tau, 1);

  // (2 pi i)^{-k} theta'(0)^k
  Nilpotent<cplx> integrand = Nilpotent<cplx>::constant(m, std::pow(thp / two_pi_i, model.half_dim));
  std::vector<cplx> ratio_taylor(static_cast<std::size_t>(top) + 1);  // theta(y)/y = sum theta^{(j)}(0)/j! y^{j-1}
  double fact = 1.0;
  for (int j = 1; j <= top + 1; ++j) {
    fact *= j;
    ratio_taylor[static_cast<std::size_t>(j - 1)] = theta_derivative(0.0, tau, j) / fact;
  }
  for (const auto& c : comp.tangent_roots) {
    Nilpotent<cplx> y = to_cplx(c) * Nilpotent<cplx>(1.0 / two_pi_i);
    Nilpotent<cplx> th_over_y = y.apply_series(ratio_taylor);
    integrand = integrand * th_over_y.inverse() * Nilpotent<cplx>(two_pi_i);
  }
  for (const auto& ns : comp.normals)
    for (const auto& x : ns.roots) {
      Nilpotent<cplx> eps = to_cplx(x) * Nilpotent<cplx>(1.0 / two_pi_i);
      integrand = integrand * theta_at(static_cast<double>(ns.m) * t, eps, tau).inverse();
    }

  // chi_M(U + T t) = sum_g w_g sum_gamma e^{(U, gamma)} z^{(T, gamma)} q^{(gamma,gamma)/2} / eta^c
  std::vector<cplx> h(static_cast<std::size_t>(L.rank));
  for (int i = 0; i < L.rank; ++i) h[i] = comp.T[i].get_d() * t;
  std::vector<Nilpotent<cplx>> u;
  bool has_u = false;
  for (const auto& ui : comp.U) {
    u.push_back(to_cplx(ui));
    has_u = has_u || !ui.is_zero();
  }
  auto dd = discriminant_group(L);
  Nilpotent<cplx> chi = Nilpotent<cplx>::constant(m, 0.0);
  for (const auto& [g, w] : module) {
    const double wd = w.get_d();
    cplx scalar = 0.0;
    lattice_points(L, dd.coset_reps.at(g), tau.imag(), imag_norm(L, h),
                   [&](const std::vector<double>& gg, double half_norm) {
                     cplx term = wd * std::exp(two_pi_i * (pair_h(h, gg) + tau * half_norm));
                     if (!has_u) {
                       scalar += term;
                       return;
                     }
                     Nilpotent<cplx> ug = Nilpotent<cplx>::constant(m, 0.0);
                     for (int i = 0; i < L.rank; ++i) ug += u[i] * Nilpotent<cplx>(gg[i]);
                     chi += ug.exp() * Nilpotent<cplx>(term);
                   });
    chi += Nilpotent<cplx>(scalar);
  }
  chi = chi * Nilpotent<cplx>(1.0 / std::pow(eta_value(tau), L.rank));
  integrand = integrand * chi;
  return static_cast<double>(comp.sign) * integrand.integrate();
}

cplx genus_value_direct(const FixedPointModel& model, const std::map<std::size_t, Rational>& module, cplx t,
                        cplx tau) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < model.components.size(); ++i) acc += component_value_direct(model, i, module, t, tau);
  return acc;
}

Report jacobi_form_check(const FixedPointModel& model, const SL2& A, const std::vector<std::pair<cplx, cplx>>& points,
                         double tol, int order) {
  const long l = anomaly_check(model);
  const int k = model.half_dim;
  const EvenLattice& L = model.lattice;
  auto dd = discriminant_group(L);
  const std::size_t n = dd.coset_reps.size();
  std::ostringstream title;
  title << "Jacobi form law for A = [[" << A.a << "," << A.b << "],[" << A.c << "," << A.d << "]], order " << order;
  Report rep(title.str());

  // rho(T) = diag e^{2 pi i ((beta,beta)/2 - c/24)}, rho(S) from the characters
  std::vector<Rational> t_exp(n);
  CMatrix rho_t = identity(n);
  for (std::size_t g = 0; g < n; ++g) {
    t_exp[g] = L.norm(dd.coset_reps[g]) / 2 - ratio(L.rank, 24);
    rho_t[g][g] = std::exp(kTwoPi * kI * frac_part(t_exp[g]).get_d());
  }
  Word word = sl2_word(A);
  CMatrix rho = identity(n);
  bool need_s = false;
  for (const auto& [op, e] : word) need_s = need_s || op == 'S';
  CMatrix rho_s;
  if (need_s) {
    SMatrixResult sr = character_S_matrix(L, cplx(0.0, 1.0), 1e-6);
    rep.merge(sr.report, "S-matrix: ");
    rho_s = sr.S;
  }
  for (const auto& [op, e] : word) {
    if (op == 'S') {
      rho = matmul(rho, rho_s);
    } else {
      CMatrix p = identity(n);
      for (std::size_t g = 0; g < n; ++g) p[g][g] = std::pow(rho_t[g][g], static_cast<double>(e));
      rho = matmul(rho, p);
    }
  }
  std::vector<cplx> mix(n, 0.0);  // F_M(A x) = j * sum_h mix_h F_h(x)
  for (const auto& [g, w] : model.module)
    for (std::size_t h = 0; h < n; ++h) mix[h] += w.get_d() * rho[g][h];

  GenusSeries gs = elliptic_genus(model, Rational(order));
  for (const auto& [t, tau] : points) {
    check_tau(tau);
    const cplx ctd = static_cast<double>(A.c) * tau + static_cast<double>(A.d);
    const cplx tau2 = (static_cast<double>(A.a) * tau + static_cast<double>(A.b)) / ctd;
    const cplx t2 = t / ctd;
    EvalResult lhs = gs.reduced_ok() ? eval(*gs.reduced, tau2, t2) : eval(gs.raw, tau2, t2);
    cplx rhs = 0.0;
    for (std::size_t h = 0; h < n; ++h)
      if (std::abs(mix[h]) > 1e-14) rhs += mix[h] * genus_value_direct(model, {{h, Rational(1)}}, t, tau);
    rhs *= std::pow(ctd, k) * std::exp(M_PI * kI * static_cast<double>(l * A.c) * t * t / ctd);
    const double scale = std::max(std::abs(lhs.value), std::abs(rhs));
    const double err = scale < 1e-12 ? 0.0 : std::abs(lhs.value - rhs) / scale;
    const double tail = scale < 1e-12 ? 0.0 : lhs.tail_bound / scale;
    rep.add("(t, tau) = (" + fmt(t) + ", " + fmt(tau) + ")", err < tol + tail,
            scale < 1e-12 ? "both sides vanish" : "relative error " + fmt(err) + ", tail " + fmt(tail));
  }

  if (word.size() == 1 && word[0].first == 'T') {
    // exact form of the T-law: every exponent of F_M lies in (beta_g,beta_g)/2 - c/24 + Z for a module coset g
    std::optional<Rational> bad;
    for (const auto& [key, c] : gs.raw.terms()) {
      Rational e = gs.raw.exponent_of(key);
      bool found = false;
      for (const auto& [g, w] : model.module) found = found || frac_part(e - t_exp[g]) == 0;
      if (!found && !bad) bad = e;
    }
    rep.add("exact T-phase of the series", !bad,
            bad ? "exponent " + to_string(*bad) + " is off the module class" : "all exponents on the module class");
  }
  return rep;
}

double winding_along(const std::function<cplx(cplx)>& f, const std::vector<cplx>& polygon, int samples) {
  if (polygon.size() < 2) throw std::invalid_argument("winding contour needs at least two vertices");
  double total = 0.0;
  std::function<void(cplx, cplx, cplx, cplx, int)> step = [&](cplx a, cplx b, cplx fa, cplx fb, int depth) {
    double d = std::arg(fb / fa);
    if (std::abs(d) > M_PI / 8 && depth < 30) {
      cplx mid = 0.5 * (a + b);
      cplx fm = f(mid);
      step(a, mid, fa, fm, depth + 1);
      step(mid, b, fm, fb, depth + 1);
      return;
    }
    total += d;
  };
  for (std::size_t s = 0; s < polygon.size(); ++s) {
    cplx a = polygon[s], b = polygon[(s + 1) % polygon.size()];
    cplx prev_t = a, prev_f = f(a);
    for (int j = 1; j <= samples; ++j) {
      cplx tj = a + (b - a) * (static_cast<double>(j) / samples);
      cplx fj = f(tj);
      step(prev_t, tj, prev_f, fj, 0);
      prev_t = tj;
      prev_f = fj;
    }
  }
  return total / kTwoPi;
}

long winding_count(const std::function<cplx(cplx)>& f, const std::vector<cplx>& polygon, int samples, double tol) {
  double fmax = 0.0, fmin = INFINITY;
  for (std::size_t s = 0; s < polygon.size(); ++s) {
    cplx a = polygon[s], b = polygon[(s + 1) % polygon.size()];
    for (int j = 0; j < samples; ++j) {
      double v = std::abs(f(a + (b - a) * (static_cast<double>(j) / samples)));
      fmax = std::max(fmax, v);
      fmin = std::min(fmin, v);
    }
  }
  if (!(fmin > 10.0 * tol * fmax))
    throw NumericError("contour passes near a zero: min |f| = " + fmt(fmin) + ", max |f| = " + fmt(fmax));
  double w = winding_along(f, polygon, samples);
  long r = std::lround(w);
  if (std::abs(w - static_cast<double>(r)) > 1e-3) throw NumericError("winding " + fmt(w) + " is not near an integer");
  return r;
}

long winding_number(const GenusSeries& gs, cplx tau, int samples, cplx base) {
  check_tau(tau);
  if (!gs.reduced_ok()) throw PreconditionFailed("winding number needs a reduced genus series");
  if (gs.reduced->is_zero()) throw PreconditionFailed("F is identically zero on the computed window");
  const QSeries<LaurentZ>& F = *gs.reduced;
  double worst_tail = 0.0;
  auto f = [&](cplx t) {
    EvalResult r = eval(F, tau, t);
    worst_tail = std::max(worst_tail, r.tail_bound / std::max(std::abs(r.value), 1e-300));
    return r.value;
  };
  const cplx b = base + 0.071 * tau;
  std::vector<cplx> polygon = {b, b + 2.0, b + 2.0 + 2.0 * tau, b + 2.0 * tau};
  long w = winding_count(f, polygon, samples);
  if (worst_tail > 1e-6) throw NumericError("series tail too large on the contour (relative " + fmt(worst_tail) + ")");
  return w;
}

}  // namespace rlab
