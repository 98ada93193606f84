#include "rlab/acceptance.hpp"

#include "rlab/characters.hpp"
#include "rlab/genus.hpp"
#include "rlab/lattice.hpp"
#include "rlab/numeric_checks.hpp"
#include "rlab/oracle.hpp"
#include "rlab/theta.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <thread>

namespace rlab {

namespace {

const cplx kI(0.0, 1.0);

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::string window_text(const Cutoff& c) { return "window q^" + (c ? to_string(*c) : std::string("inf")); }

template <class C>
void compare_series(Report& rep, const std::string& name, const QSeries<C>& a, const QSeries<C>& b) {
  auto bad = first_mismatch(a, b);
  if (bad)
    rep.add(name, false, "first mismatch at q^" + to_string(*bad));
  else
    rep.add(name, true, window_text(min_cutoff(a.cutoff(), b.cutoff())));
}

// Counts of K + offset by norm/2 <= bound, scanning a coordinate box
// |x_i| <= sqrt(2 B (G^{-1})_ii) around the offset.
std::map<Rational, long> box_counts(const EvenLattice& L, const RatVec& offset, const Rational& bound) {
  std::map<Rational, long> counts;
  if (L.rank == 0) {
    counts[Rational(0)] = 1;
    return counts;
  }
  RatMatrix gi = inverse_matrix(L.gram);
  std::vector<long> lo(L.rank), hi(L.rank);
  for (int i = 0; i < L.rank; ++i) {
    double r = std::sqrt(2.0 * bound.get_d() * gi[i][i].get_d()) + 1.0;
    lo[i] = static_cast<long>(std::floor(-r - offset[i].get_d()));
    hi[i] = static_cast<long>(std::ceil(r - offset[i].get_d()));
  }
  std::vector<long> k(lo);
  for (;;) {
    RatVec x(L.rank);
    for (int i = 0; i < L.rank; ++i) x[i] = Rational(k[i]) + offset[i];
    Rational n = L.norm(x) / 2;
    if (n <= bound) ++counts[n];
    int i = 0;
    while (i < L.rank && ++k[i] > hi[i]) {
      k[i] = lo[i];
      ++i;
    }
    if (i == L.rank) break;
  }
  return counts;
}

// E8 as the even-sum vectors of Z^8 u (Z + 1/2)^8, counted by norm/2 <= bound.
std::map<Rational, long> e8_orthonormal_counts(long bound) {
  std::map<Rational, long> counts;
  const long limit = 8 * bound;  // sum (2x_i)^2 <= 8 bound
  std::vector<long> y(8);
  for (int half = 0; half <= 1; ++half) {
    std::function<void(int, long, long)> rec = [&](int i, long partial, long sum) {
      if (i == 8) {
        if ((sum / 2) % 2 == 0) ++counts[Rational(partial, 8)];
        return;
      }
      for (long v = -9; v <= 9; ++v) {
        if ((v & 1) != half) continue;
        long p = partial + v * v;
        if (p <= limit) rec(i + 1, p, sum + v);
      }
    };
    rec(0, 0, 0);
  }
  return counts;
}

std::map<Rational, long> series_counts(const QSeries<CycRat>& s) {
  std::map<Rational, long> out;
  for (const auto& [k, c] : s.terms()) {
    if (!c.is_rational() || c.to_rational().get_den() != 1) throw std::logic_error("non-integral theta coefficient");
    out[s.exponent_of(k)] = to_long(c.to_rational().get_num());
  }
  return out;
}

void compare_counts(Report& rep, const std::string& name, const std::map<Rational, long>& engine,
                    const std::map<Rational, long>& oracle) {
  for (const auto& [e, n] : oracle) {
    auto it = engine.find(e);
    long got = it == engine.end() ? 0 : it->second;
    if (got != n) {
      rep.add(name, false, "q^" + to_string(e) + ": " + std::to_string(got) + " vs " + std::to_string(n));
      return;
    }
  }
  for (const auto& [e, n] : engine)
    if (!oracle.count(e)) {
      rep.add(name, false, "q^" + to_string(e) + " not found by the box scan");
      return;
    }
  rep.add(name, true, std::to_string(oracle.size()) + " exponents");
}

EvenLattice shipped_lattice(const AcceptanceConfig& cfg, const std::string& file) {
  return load_lattice(cfg.models_dir + "/" + file);
}

FixedPointModel shipped_model(const AcceptanceConfig& cfg, const std::string& name) {
  return load_model(cfg.models_dir + "/" + name + ".json");
}

Rational capped(const AcceptanceConfig& cfg, long order) { return Rational(cfg.quick ? std::min(order, 2L) : order); }

// ---- criteria -------------------------------------------------------------

Report c1_theta_shifts(const AcceptanceConfig& cfg) {
  return theta_shift_checks(capped(cfg, 12) + Rational(1, 8), cfg.inject_fault);
}

Report c2_theta_S(const AcceptanceConfig&) {
  Report rep;
  const std::vector<std::pair<cplx, cplx>> pts = {{0.3, cplx(0.2, 1.1)},
                                                   {0.25, kI},
                                                   {cplx(0.1, 0.2), cplx(-0.4, 0.9)},
                                                   {cplx(-0.37, 0.05), cplx(0.45, 1.3)},
                                                   {cplx(0.05, -0.1), cplx(0.0, 0.8)}};
  for (const auto& [t, tau] : pts) rep.merge(theta_S_check(t, tau, 1e-8, 40));
  return rep;
}

Report c3_theta_prime(const AcceptanceConfig& cfg) {
  Report rep;
  const Rational T = capped(cfg, 20) + Rational(1, 8);
  compare_series(rep, "theta'(0)/2pi = eta^3", theta_prime_zero_over_2pi(T), dedekind_eta(T).pow(3));
  const cplx tau(0.0, 1.3);
  cplx lhs = theta_derivative(0.0, tau, 1) / (2 * M_PI);
  cplx rhs = std::pow(eta_value(tau), 3);
  double rel = std::abs(lhs - rhs) / std::abs(rhs);
  rep.add("numeric at tau = 1.3i", rel < 1e-10, "relative error " + fmt(rel));
  return rep;
}

Report c4_lattice_theta(const AcceptanceConfig& cfg) {
  Report rep;
  const Rational B(10);
  for (const char* file : {"a1.json", "a2.json"}) {
    auto L = shipped_lattice(cfg, file);
    auto dd = discriminant_group(L);
    for (std::size_t g = 0; g < dd.coset_reps.size(); ++g) {
      auto s = theta_series(L, dd.coset_reps[g], ExpCharacter::trivial(), std::nullopt, B);
      compare_counts(rep, L.name + " coset " + std::to_string(g) + " vs box scan", series_counts(s),
                     box_counts(L, dd.coset_reps[g], B));
    }
  }
  auto e8 = shipped_lattice(cfg, "e8.json");
  auto s = series_counts(theta_series(e8, e8.zero(), ExpCharacter::trivial(), std::nullopt, B));
  auto oracle = e8_orthonormal_counts(10);
  compare_counts(rep, "E8 vs orthonormal enumeration", s, oracle);
  long c1 = s.count(Rational(1)) ? s.at(Rational(1)) : 0;
  rep.add("E8 coefficient of q^1", c1 == 240 && oracle.at(Rational(1)) == 240,
          std::to_string(c1) + " roots (enumerated " + std::to_string(oracle.at(Rational(1))) + ")");
  return rep;
}

Report c5_zhu(const AcceptanceConfig&) { return zhu_checks(12, 12); }

Report c6_quasi_periodicity(const AcceptanceConfig& cfg) {
  Report rep;
  std::mt19937 rng(cfg.seed);
  for (const char* file : {"a1.json", "a2.json", "e8.json"}) {
    auto L = shipped_lattice(cfg, file);
    auto dd = discriminant_group(L);
    std::uniform_int_distribution<long> coord(-2, 2), num(-6, 6), den(1, 7);
    for (int trial = 0; trial < 3; ++trial) {
      RatVec alpha;
      do {
        alpha = L.zero();
        for (auto& x : alpha) x = Rational(coord(rng));
      } while (L.norm(alpha) > 4 || L.norm(alpha) == 0);
      RatVec h = L.zero();
      for (auto& x : h) x = ratio(num(rng), den(rng));
      std::size_t g = std::uniform_int_distribution<std::size_t>(0, dd.coset_reps.size() - 1)(rng);
      rep.merge(quasi_periodicity_check(L, dd.coset_reps[g], h, alpha, Rational(8)),
                L.name + " coset " + std::to_string(g) + ", |alpha|^2 = " + to_string(L.norm(alpha)) + ": ");
    }
  }
  return rep;
}

Report c7_t_transformation(const AcceptanceConfig& cfg) {
  Report rep;
  for (const char* file : {"a1.json", "a2.json", "gram4.json", "gram8.json", "e8.json"}) {
    auto L = shipped_lattice(cfg, file);
    rep.merge(t_transformation_check(L, capped(cfg, 8)), L.name + " ");
  }
  return rep;
}

Report c8_S_matrix(const AcceptanceConfig& cfg) {
  Report rep;
  const cplx tau(0.05, 1.1);
  for (const char* file : {"a1.json", "a2.json"}) {
    auto L = shipped_lattice(cfg, file);
    auto r = character_S_matrix(L, tau, 1e-6, cfg.seed);
    rep.merge(r.report, L.name + " ");
    // residual of chi_g(-1/tau) = sum_h S_gh chi_h(tau) with characters to q^30
    auto dd = discriminant_group(L);
    std::vector<QSeries<CycRat>> chi;
    for (const auto& b : dd.coset_reps) chi.push_back(character(L, b, ExpCharacter::trivial(), std::nullopt, Rational(30)));
    double worst = 0.0;
    for (cplx t0 : {cplx(0.0, 1.0), cplx(0.3, 0.9), cplx(-0.2, 1.4)}) {
      std::vector<cplx> at, rot;
      for (const auto& c : chi) {
        at.push_back(eval(c, t0).value);
        rot.push_back(eval(c, -1.0 / t0).value);
      }
      for (std::size_t g = 0; g < chi.size(); ++g) {
        cplx rhs = 0.0;
        for (std::size_t h = 0; h < chi.size(); ++h) rhs += r.S[g][h] * at[h];
        worst = std::max(worst, std::abs(rot[g] - rhs) / std::abs(rot[g]));
      }
    }
    rep.add(L.name + " residual at order 30", worst < 1e-6, "relative " + fmt(worst));
  }
  return rep;
}

Report c9_s2(const AcceptanceConfig& cfg) {
  auto gs = elliptic_genus(shipped_model(cfg, "s2"), capped(cfg, cfg.order));
  Report rep;
  rep.add("anomaly l = -1", gs.l == -1, "l = " + std::to_string(gs.l));
  rep.merge(rigidity_report(gs));
  rep.add("raw sum identically zero", gs.raw.is_zero(), window_text(gs.raw.cutoff()));
  return rep;
}

Report c10_circle_bundle(const AcceptanceConfig& cfg) {
  auto model = shipped_model(cfg, "circle_bundle");
  auto gs = elliptic_genus(model, capped(cfg, cfg.order));
  Report rep;
  rep.add("anomaly l = 0", gs.l == 0, "l = " + std::to_string(gs.l));
  rep.merge(rigidity_report(gs));
  auto [e, value] = weight_sum_oracle(model);
  Reduction r = reduce_rational(value);
  bool ok = r.ok() && gs.reduced_ok() && gs.reduced->valuation() == e && gs.reduced->coefficient(e) == *r.value;
  rep.add("lowest coefficient = weight-sum index", ok,
          "q^" + to_string(e) + ": " + (r.ok() ? r.value->str() : value.str()));
  return rep;
}

Report c11_pole_cancellation(const AcceptanceConfig& cfg) {
  Report rep;
  const Rational T = capped(cfg, cfg.order);
  for (const char* name : {"s2", "circle_bundle"}) {
    auto gs = elliptic_genus(shipped_model(cfg, name), T);
    rep.add(std::string(name) + " reduces to Laurent polynomials", gs.reduced_ok(),
            gs.reduced_ok() ? window_text(gs.raw.cutoff())
                            : std::to_string(gs.failures.size()) + " coefficient(s) keep a pole");
  }
  auto neg = elliptic_genus(shipped_model(cfg, "negative_control"), T);
  rep.add("negative control reported as failing", !neg.reduced_ok(),
          neg.reduced_ok() ? "unexpectedly reduced"
                           : "first failure at q^" + to_string(neg.failures.front().first));
  return rep;
}

Report c12_shift_law(const AcceptanceConfig& cfg) {
  return shift_law_check(shipped_model(cfg, "circle_bundle"), 2, capped(cfg, cfg.order));
}

Report c13_oracle(const AcceptanceConfig& cfg) {
  Report rep;
  const Rational T = capped(cfg, 4);
  for (const char* name : {"s2", "circle_bundle"}) {
    auto model = shipped_model(cfg, name);
    auto engine = elliptic_genus(model, T).raw;
    auto oracle = bundle_expansion_oracle(model, T);
    auto diff = engine - oracle;
    bool ok = diff.is_zero() && engine.cutoff() == oracle.cutoff();
    rep.add(std::string(name) + ": engine = bundle expansion", ok,
            ok ? window_text(engine.cutoff()) : "differs at q^" + to_string(diff.valuation().value_or(T)));
  }
  return rep;
}

Report c14_jacobi(const AcceptanceConfig& cfg) {
  const std::vector<std::pair<cplx, cplx>> pts = {
      {0.2, cplx(0.0, 1.5)}, {cplx(0.13, 0.05), cplx(0.1, 1.2)}, {cplx(-0.31, 0.02), cplx(-0.2, 1.1)}};
  return jacobi_form_check(shipped_model(cfg, "circle_bundle"), {0, -1, 1, 0}, pts, 1e-5, 30);
}

struct Criterion {
  int id;
  const char* title;
  double time_limit;
  bool in_quick;
  Report (*run)(const AcceptanceConfig&);
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "theta elliptic shifts and T-shift, exact to q^{12+1/8}", 1.0, true, c1_theta_shifts},
      {2, "theta S-transformation at 5 points, order 40", 0.0, true, c2_theta_S},
      {3, "theta'(0)/2pi = eta^3 exactly and at tau = 1.3i", 0.0, true, c3_theta_prime},
      {4, "A1, A2, E8 theta series against enumeration to q^10", 0.0, false, c4_lattice_theta},
      {5, "Zhu coefficients c(k,m,m) = 1 and c(k,i,0) = binomial(k-1,i)", 0.0, true, c5_zhu},
      {6, "character quasi-periodicity, A1 A2 E8, 3 random alpha each, to q^8", 0.0, false,
       c6_quasi_periodicity},
      {7, "character T-transformation for every shipped lattice and coset", 0.0, true, c7_t_transformation},
      {8, "character S-matrix unitary, Poisson oracle, residual at order 30", 0.0, false, c8_S_matrix},
      {9, "S^2 elliptic genus vanishes", 5.0, true, c9_s2},
      {10, "circle bundle elliptic genus is rigid", 0.0, true, c10_circle_bundle},
      {11, "pole cancellation and the negative control", 0.0, true, c11_pole_cancellation},
      {12, "shift law with a = 2 on the circle bundle", 0.0, true, c12_shift_law},
      {13, "bundle-expansion oracle equals the fixed-point sum to q^4", 0.0, true, c13_oracle},
      {14, "Jacobi-form S-law on the circle bundle, 3 points, order 30", 0.0, false, c14_jacobi},
  };
  return list;
}

CriterionResult run_one(const Criterion& c, const AcceptanceConfig& cfg) {
  CriterionResult r;
  r.id = c.id;
  r.title = c.title;
  r.time_limit = cfg.timing ? c.time_limit : 0.0;
  if (cfg.quick && !c.in_quick) {
    r.skipped = true;
    return r;
  }
  auto start = std::chrono::steady_clock::now();
  try {
    r.report = c.run(cfg);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

bool CriterionResult::passed() const {
  if (skipped) return true;
  if (!error.empty() || report.items().empty() || !report.passed()) return false;
  return time_limit <= 0.0 || seconds < time_limit;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& config) {
  const auto& list = criteria();
  std::vector<CriterionResult> results(list.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < list.size();) results[i] = run_one(list[i], config);
  };
  const unsigned n = std::max(1u, std::min<unsigned>(config.threads, list.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

std::string acceptance_text(const std::vector<CriterionResult>& results, bool details, bool timing) {
  std::string out;
  char buf[64];
  for (const auto& r : results) {
    const char* tag = r.skipped ? "[SKIP]" : r.passed() ? "[PASS]" : "[FAIL]";
    std::snprintf(buf, sizeof buf, "%s %2d  ", tag, r.id);
    out += buf + r.title;
    if (!r.skipped && timing) {
      std::snprintf(buf, sizeof buf, "  (%.2f s", r.seconds);
      out += buf;
      if (r.time_limit > 0.0) {
        std::snprintf(buf, sizeof buf, ", limit %.0f s", r.time_limit);
        out += buf;
      }
      out += ")";
    }
    out += "\n";
    if (!r.error.empty()) out += "        error: " + r.error + "\n";
    for (const auto& it : r.report.items())
      if (details || !it.passed) {
        out += std::string(it.passed ? "        PASS  " : "        FAIL  ") + it.name;
        if (!it.detail.empty()) out += "  (" + it.detail + ")";
        out += "\n";
      }
  }
  return out;
}

nlohmann::json acceptance_json(const std::vector<CriterionResult>& results, bool timing) {
  nlohmann::json j;
  j["passed"] = all_passed(results);
  j["criteria"] = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json c = r.report.json();
    c["id"] = r.id;
    c["title"] = r.title;
    c["skipped"] = r.skipped;
    c["passed"] = r.passed();
    if (timing) c["seconds"] = r.seconds;
    if (!r.error.empty()) c["error"] = r.error;
    j["criteria"].push_back(c);
  }
  return j;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.passed()) return false;
  return true;
}

}  // namespace rlab
