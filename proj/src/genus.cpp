#include "rlab/genus.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace rlab {

namespace {

using json = nlohmann::json;

std::string nil_str(const Nilpotent<Rational>& x) {
  if (!x.model()) return to_string(x.constant_term());
  const auto& m = *x.model();
  std::string out;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    const Rational& c = x.coefficient(i);
    if (c == 0) continue;
    std::string mono;
    auto md = m.multidegree(i);
    for (std::size_t g = 0; g < md.size(); ++g) {
      if (md[g] == 0) continue;
      std::string name = g < m.names().size() ? m.names()[g] : "g" + std::to_string(g + 1);
      mono += (mono.empty() ? "" : "*") + name + (md[g] > 1 ? "^" + std::to_string(md[g]) : "");
    }
    if (!out.empty()) out += " + ";
    out += mono.empty() ? to_string(c) : (c == 1 ? mono : to_string(c) + "*" + mono);
  }
  return out.empty() ? "0" : out;
}

Rational json_rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
      throw ModelError(where + ": " + e.what());
    }
  }
  throw ModelError(where + ": expected an integer or a \"p/q\" string");
}

long json_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ModelError(where + ": expected an integer");
  return j.get<long>();
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ModelError(where + ": field '" + key + "' missing");
  return obj.at(key);
}

/// Linear combination sum_i coeffs[i] h_i in a cp1-product ring.
Nilpotent<Rational> linear_class(const NilModelPtr& model, const json& coeffs, const std::string& where) {
  if (!coeffs.is_array() || coeffs.size() != model->generators())
    throw ModelError(where + ": expected " + std::to_string(model->generators()) + " coefficients");
  Nilpotent<Rational> x = Nilpotent<Rational>::constant(model, Rational(0));
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    Rational c = json_rational(coeffs[i], where + "[" + std::to_string(i) + "]");
    if (c != 0) x += Nilpotent<Rational>::generator(model, i) * Nilpotent<Rational>(c);
  }
  return x;
}

NilModelPtr cp1_product(int factors) {
  std::vector<int> tops(static_cast<std::size_t>(factors), 1);
  std::vector<std::string> names;
  for (int i = 0; i < factors; ++i) names.push_back("h" + std::to_string(i + 1));
  return std::make_shared<const NilpotentModel>(
      tops, std::vector<std::pair<std::vector<int>, Rational>>{{tops, Rational(1)}}, names);
}

FixedComponent parse_component(const json& c, const EvenLattice& L, const std::string& where) {
  if (!c.is_object()) throw ModelError(where + ": expected an object");
  FixedComponent comp;
  comp.label = c.value("label", where);
  std::string type = c.value("type", std::string("point"));
  int factors = 0;
  if (type == "point") {
    comp.cohomology = NilpotentModel::point();
  } else if (type == "cp1-product") {
    factors = static_cast<int>(json_int(c.contains("factors") ? c.at("factors") : json(1), where + ".factors"));
    if (factors < 1 || factors > 6) throw ModelError(where + ".factors: must be between 1 and 6");
    comp.cohomology = cp1_product(factors);
    for (int i = 0; i < factors; ++i)
      comp.tangent_roots.push_back(Nilpotent<Rational>::generator(comp.cohomology, static_cast<std::size_t>(i)) *
                                   Nilpotent<Rational>(Rational(2)));
  } else {
    throw ModelError(where + ".type: unknown component type '" + type + "' (expected point or cp1-product)");
  }

  const json& m = require(c, "m", where);
  if (!m.is_array() || m.empty()) throw ModelError(where + ".m: expected a nonempty array of rotation numbers");
  std::vector<long> d(m.size(), 1);
  if (c.contains("d")) {
    const json& dj = c.at("d");
    if (!dj.is_array() || dj.size() != m.size()) throw ModelError(where + ".d: must have the same length as m");
    for (std::size_t i = 0; i < dj.size(); ++i) {
      d[i] = json_int(dj[i], where + ".d[" + std::to_string(i) + "]");
      if (d[i] < 1) throw ModelError(where + ".d[" + std::to_string(i) + "]: must be positive");
    }
  }
  const json* chern = c.contains("chern") ? &c.at("chern") : nullptr;
  if (chern && type == "point") {
    for (const auto& [k, v] : chern->items())
      if (!v.empty()) throw ModelError(where + ".chern: an isolated point has no nonzero classes");
  }
  const json* normal = chern && chern->contains("normal") ? &chern->at("normal") : nullptr;
  if (normal && (!normal->is_array() || normal->size() != m.size()))
    throw ModelError(where + ".chern.normal: expected one entry per normal summand");
  for (std::size_t g = 0; g < m.size(); ++g) {
    NormalSummand ns;
    ns.m = static_cast<int>(json_int(m[g], where + ".m[" + std::to_string(g) + "]"));
    if (ns.m == 0) throw ModelError(where + ".m[" + std::to_string(g) + "]: rotation numbers must be nonzero");
    for (long j = 0; j < d[g]; ++j) {
      std::string w = where + ".chern.normal[" + std::to_string(g) + "][" + std::to_string(j) + "]";
      if (normal) {
        const json& roots = (*normal)[g];
        if (!roots.is_array() || static_cast<long>(roots.size()) != d[g])
          throw ModelError(where + ".chern.normal[" + std::to_string(g) + "]: expected d = " + std::to_string(d[g]) +
                           " roots");
        ns.roots.push_back(linear_class(comp.cohomology, roots[static_cast<std::size_t>(j)], w));
      } else {
        ns.roots.push_back(Nilpotent<Rational>::constant(comp.cohomology, Rational(0)));
      }
    }
    comp.normals.push_back(std::move(ns));
  }

  comp.T = L.zero();
  if (c.contains("T")) {
    const json& t = c.at("T");
    if (!t.is_array() || static_cast<int>(t.size()) != L.rank)
      throw ModelError(where + ".T: expected " + std::to_string(L.rank) + " coordinates");
    for (std::size_t i = 0; i < t.size(); ++i) comp.T[i] = json_rational(t[i], where + ".T[" + std::to_string(i) + "]");
  }
  comp.U.assign(static_cast<std::size_t>(L.rank), Nilpotent<Rational>::constant(comp.cohomology, Rational(0)));
  if (chern && chern->contains("U")) {
    const json& u = chern->at("U");
    if (!u.is_array() || static_cast<int>(u.size()) != L.rank)
      throw ModelError(where + ".chern.U: expected one class per lattice coordinate");
    for (std::size_t i = 0; i < u.size(); ++i)
      comp.U[i] = linear_class(comp.cohomology, u[i], where + ".chern.U[" + std::to_string(i) + "]");
  }
  if (c.contains("sign")) {
    long s = json_int(c.at("sign"), where + ".sign");
    if (s != 1 && s != -1) throw ModelError(where + ".sign: must be 1 or -1");
    comp.sign = static_cast<int>(s);
  }
  return comp;
}

EvenLattice parse_lattice_field(const json& j, const std::string& base_dir) {
  try {
    if (j.is_object()) return lattice_from_json_text(j.dump());
    if (j.is_string()) {
      std::string s = j.get<std::string>();
      try {
        return standard_lattice(s);
      } catch (const InvalidLattice&) {
      }
      return load_lattice((std::filesystem::path(base_dir) / s).string());
    }
  } catch (const InvalidLattice& e) {
    throw ModelError(std::string("lattice: ") + e.what());
  }
  throw ModelError("lattice: expected an inline object, a standard name or a file name");
}

QSeries<Nilpotent<LaurentZ>> lift_series(const QSeries<Rational>& s) {
  return s.map([](const Rational& r) { return Nilpotent<LaurentZ>(LaurentZ(CycRat(r))); });
}

Nilpotent<LaurentZ> lift_nil(const Nilpotent<Rational>& x) {
  return x.map([](const Rational& r) { return LaurentZ(CycRat(r)); });
}

/// Integrand of a component with t replaced by t + a tau (a = 0 gives local_contribution).
FactoredSeries component_integrand(const FixedPointModel& model, const FixedComponent& comp, const Rational& cutoff,
                                   long a) {
  const int c = model.lattice.rank;
  const RatVec aT = [&] {
    RatVec v = comp.T;
    for (auto& x : v) x *= a;
    return v;
  }();
  const Rational inner = cutoff + ratio(c, 24) + model.lattice.norm(aT) / 2;
  Nilpotent<RationalZ> pre(RationalZ(1L));
  QSeries<Nilpotent<LaurentZ>> series = module_theta(model, comp, inner, a);
  for (const auto& root : comp.tangent_roots) {
    FactoredSeries tf = tangent_factor(root, inner);
    pre = pre * tf.prefactor;
    series = series * tf.series;
  }
  Rational q_extra = 0;
  Nilpotent<LaurentZ> scale(LaurentZ(1L));
  for (const auto& ns : comp.normals) {
    for (const auto& x : ns.roots) {
      FactoredSeries nr = normalized_reciprocal(ns.m, x, inner);
      pre = pre * nr.prefactor;
      series = series * nr.series;
      if (a != 0) {
        // R(v + n tau) = (-1)^n q^{n^2/2} zeta^n R(v), n = m a, zeta = z^m e^x
        const long n = ns.m * a;
        Nilpotent<Rational> ex = (x * Nilpotent<Rational>(Rational(n))).exp();
        LaurentZ zpart = LaurentZ::monomial(CycRat(n % 2 == 0 ? 1L : -1L), static_cast<int>(2 * ns.m * n));
        scale = scale * lift_nil(ex) * Nilpotent<LaurentZ>(zpart);
        q_extra += Rational(n * n, 2);
      }
    }
  }
  if (c != 0) series = series * lift_series(euler_product_power(-c, inner));
  if (a != 0) series = series.scaled(scale).q_shifted(q_extra);
  series = series.q_shifted(-ratio(c, 24)).truncated(cutoff);
  return {pre, series};
}

void require_reduced(const GenusSeries& gs, const std::string& what) {
  if (!gs.reduced_ok())
    throw AnomalyError(what + ": coefficient at q^" + to_string(gs.failures.front().first) +
                       " does not reduce (residual denominator " + gs.failures.front().second.str() + ")");
}

}  // namespace

int FixedComponent::dimension() const {
  int k = static_cast<int>(tangent_roots.size());
  for (const auto& ns : normals) k += static_cast<int>(ns.roots.size());
  return k;
}

bool FixedPointModel::isolated() const {
  for (const auto& c : components)
    if (!c.isolated()) return false;
  return true;
}

FixedPointModel model_from_json_text(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("malformed model JSON: ") + e.what());
  }
  if (!j.is_object()) throw ModelError("model JSON must be an object");
  FixedPointModel model;
  model.name = j.value("name", std::string());
  model.description = j.value("description", std::string());
  if (j.contains("geometric")) {
    if (!j.at("geometric").is_boolean()) throw ModelError("geometric: expected true or false");
    model.geometric = j.at("geometric").get<bool>();
  }
  model.lattice = parse_lattice_field(require(j, "lattice", "model"), base_dir);
  const long order = discriminant_group(model.lattice).group_order;

  if (!j.contains("module")) {
    model.module[0] = 1;
  } else if (j.at("module").is_number_integer()) {
    long g = j.at("module").get<long>();
    if (g < 0 || g >= order)
      throw ModelError("module: coset index " + std::to_string(g) + " out of range 0.." + std::to_string(order - 1));
    model.module[static_cast<std::size_t>(g)] = 1;
  } else if (j.at("module").is_object()) {
    for (const auto& [k, v] : j.at("module").items()) {
      long g;
      try {
        g = std::stol(k);
      } catch (const std::exception&) {
        throw ModelError("module: key '" + k + "' is not a coset index");
      }
      if (g < 0 || g >= order) throw ModelError("module: coset index " + k + " out of range");
      Rational w = json_rational(v, "module." + k);
      if (w != 0) model.module[static_cast<std::size_t>(g)] += w;
    }
    if (model.module.empty()) throw ModelError("module: all weights are zero");
  } else {
    throw ModelError("module: expected a coset index or an object {coset: weight}");
  }

  model.half_dim = static_cast<int>(json_int(require(j, "half_dim", "model"), "half_dim"));
  if (model.half_dim < 0) throw ModelError("half_dim: must be nonnegative");
  const json& comps = require(j, "components", "model");
  if (!comps.is_array() || comps.empty()) throw ModelError("components: expected a nonempty array");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    std::string where = "components[" + std::to_string(i) + "]";
    FixedComponent comp = parse_component(comps[i], model.lattice, where);
    if (comp.dimension() != model.half_dim)
      throw ModelError(where + ": k_alpha + sum d_gamma = " + std::to_string(comp.dimension()) +
                       " but half_dim = " + std::to_string(model.half_dim));
    model.components.push_back(std::move(comp));
  }
  return model;
}

FixedPointModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return model_from_json_text(ss.str(), std::filesystem::path(path).parent_path().string());
  } catch (const ModelError& e) {
    throw ModelError(path + ": " + e.what());
  }
}

long anomaly_check(const FixedPointModel& model) {
  const EvenLattice& L = model.lattice;
  std::optional<long> l;
  std::size_t first = 0;
  for (std::size_t idx = 0; idx < model.components.size(); ++idx) {
    const auto& comp = model.components[idx];
    const std::string who = "component " + std::to_string(idx) + " (" + comp.label + ")";
    const NilModelPtr& m = comp.cohomology;
    Rational scalar = L.norm(comp.T);
    Nilpotent<Rational> xm = Nilpotent<Rational>::constant(m, Rational(0));
    Nilpotent<Rational> squares = Nilpotent<Rational>::constant(m, Rational(0));
    for (const auto& y : comp.tangent_roots) squares += y * y;
    for (const auto& ns : comp.normals) {
      scalar -= Rational(ns.m) * ns.m * static_cast<long>(ns.roots.size());
      for (const auto& x : ns.roots) {
        xm += x * Nilpotent<Rational>(Rational(ns.m));
        squares += x * x;
      }
    }
    Nilpotent<Rational> tu = Nilpotent<Rational>::constant(m, Rational(0));
    Nilpotent<Rational> uu = Nilpotent<Rational>::constant(m, Rational(0));
    for (int i = 0; i < L.rank; ++i) {
      tu += comp.U[i] * Nilpotent<Rational>(L.pair(comp.T, L.basis_vector(i)));
      for (int k = 0; k < L.rank; ++k)
        if (L.gram[i][k] != 0) uu += comp.U[i] * comp.U[k] * Nilpotent<Rational>(Rational(L.gram[i][k]));
    }
    if (!(tu == xm))
      throw AnomalyError(who + ": (T,U) = " + nil_str(tu) + " but sum m x = " + nil_str(xm));
    if (!(uu == squares))
      throw AnomalyError(who + ": (U,U) = " + nil_str(uu) + " but sum y'^2 + sum x^2 = " + nil_str(squares));
    if (scalar.get_den() != 1)
      throw AnomalyError(who + ": (T,T) - sum m^2 d = " + to_string(scalar) + " is not an integer");
    long li = to_long(scalar.get_num());
    if (!l) {
      l = li;
      first = idx;
    } else if (*l != li) {
      throw AnomalyError("inconsistent l: component " + std::to_string(first) + " gives " + std::to_string(*l) +
                         ", " + who + " gives " + std::to_string(li));
    }
  }
  return l.value_or(0);
}

QSeries<Nilpotent<LaurentZ>> module_theta(const FixedPointModel& model, const FixedComponent& comp,
                                          const Rational& cutoff, long tau_shift) {
  const EvenLattice& L = model.lattice;
  std::vector<std::pair<Nilpotent<Rational>, RatVec>> u;
  for (int i = 0; i < L.rank; ++i)
    if (!comp.U[i].is_zero()) u.emplace_back(comp.U[i], L.basis_vector(i));
  ExpCharacter phase = ExpCharacter::genus(comp.T, u);
  std::optional<RatVec> shift;
  if (tau_shift != 0) {
    RatVec v = comp.T;
    for (auto& x : v) x *= tau_shift;
    shift = v;
  }
  auto dd = discriminant_group(L);
  QSeries<Nilpotent<LaurentZ>> out(1, cutoff);
  for (const auto& [g, w] : model.module) {
    auto th = genus_theta_series(L, dd.coset_reps.at(g), phase, cutoff, shift);
    out = out + (w == 1 ? th : th.scaled(Nilpotent<LaurentZ>(LaurentZ(CycRat(w)))));
  }
  return out;
}

FactoredSeries local_contribution(const FixedPointModel& model, std::size_t component, const Rational& cutoff) {
  return component_integrand(model, model.components.at(component), cutoff, 0);
}

QSeries<RationalZ> integrate_contribution(const FactoredSeries& f, int sign) {
  QSeries<RationalZ> out(f.series.denom(), f.series.cutoff());
  for (const auto& [k, c] : f.series.terms()) {
    RationalZ v = integrate_product(f.prefactor, c, RationalZ(0L));
    if (sign < 0) v = -v;
    out.add_key(k, v);
  }
  return out;
}

GenusSeries reduce_series(const QSeries<RationalZ>& raw, long l) {
  GenusSeries gs;
  gs.raw = raw;
  gs.l = l;
  QSeries<LaurentZ> red(raw.denom(), raw.cutoff());
  for (const auto& [k, c] : raw.terms()) {
    Reduction r = reduce_rational(c);
    if (r.ok())
      red.add_key(k, *r.value);
    else
      gs.failures.emplace_back(raw.exponent_of(k), r.residual);
  }
  if (gs.failures.empty()) gs.reduced = std::move(red);
  return gs;
}

GenusSeries elliptic_genus(const FixedPointModel& model, const Rational& cutoff) {
  long l = anomaly_check(model);
  QSeries<RationalZ> total(1, cutoff);
  for (const auto& comp : model.components)
    total = total + integrate_contribution(component_integrand(model, comp, cutoff, 0), comp.sign);
  return reduce_series(total, l);
}

Report rigidity_report(const GenusSeries& gs) {
  Report rep("rigidity (l = " + std::to_string(gs.l) + ")");
  const std::string through = gs.raw.cutoff() ? "through q^" + to_string(*gs.raw.cutoff()) : std::string();
  if (!gs.reduced_ok()) {
    const auto& [e, res] = gs.failures.front();
    rep.add("pole cancellation", false,
            std::to_string(gs.failures.size()) + " coefficient(s) fail to reduce; first at q^" + to_string(e) +
                " with residual denominator " + res.str());
    return rep;
  }
  const auto& red = *gs.reduced;
  rep.add("pole cancellation", true, std::to_string(red.size()) + " nonzero coefficient(s) are Laurent in z^(1/2) " + through);
  std::string moving;
  for (const auto& [k, c] : red.terms()) {
    bool constant = c.is_constant();
    if (!constant && moving.empty()) moving = "q^" + to_string(red.exponent_of(k)) + ": " + c.str();
    rep.add("q^" + to_string(red.exponent_of(k)), constant, (constant ? "constant " : "depends on z: ") + c.str());
  }
  rep.add("rigidity", moving.empty(), moving.empty() ? "every coefficient is constant in z " + through : moving);
  if (gs.l < 0) rep.add("vanishing (l < 0)", red.is_zero(), red.is_zero() ? "identically zero " + through : "nonzero");
  return rep;
}

Report shift_law_check(const FixedPointModel& model, long a, const Rational& cutoff) {
  const long l = anomaly_check(model);
  Report rep("shift law a = " + std::to_string(a) + " (l = " + std::to_string(l) + ")");
  if (a == 0) {
    rep.add("a = 0", true, "identity");
    return rep;
  }
  // theta_M(v + a T tau) is theta_M(v) up to the law's factor only if the module is stable under a T.
  auto dd = discriminant_group(model.lattice);
  for (std::size_t idx = 0; idx < model.components.size(); ++idx) {
    RatVec shift = model.components[idx].T;
    for (auto& x : shift) x *= a;
    for (std::size_t g = 0; g < dd.coset_reps.size(); ++g) {
      RatVec moved = dd.coset_reps[g];
      for (std::size_t i = 0; i < moved.size(); ++i) moved[i] += shift[i];
      std::size_t h;
      try {
        h = dd.coset_of(moved);
      } catch (const std::exception&) {
        throw PreconditionFailed("shift law: a T is not in the dual lattice at component " + std::to_string(idx));
      }
      auto weight = [&](std::size_t k) {
        auto it = model.module.find(k);
        return it == model.module.end() ? Rational(0) : it->second;
      };
      if (weight(g) != weight(h))
        throw PreconditionFailed("shift law: the module is not invariant under translation by a T = " +
                                 to_string(shift) + " at component " + std::to_string(idx));
    }
  }
  const Rational law_q = Rational(-l * a * a, 2);
  const int law_z = static_cast<int>(-2 * l * a);  // key of z^{-l a}
  const Rational extra = std::max(Rational(0), Rational(-law_q));
  GenusSeries F = elliptic_genus(model, cutoff + extra);
  require_reduced(F, "F");
  QSeries<LaurentZ> rhs = F.reduced->map([&](const LaurentZ& c) { return c * LaurentZ::monomial(CycRat(1L), law_z); })
                              .q_shifted(law_q)
                              .truncated(cutoff);

  QSeries<RationalZ> total(1, cutoff);
  for (const auto& comp : model.components)
    total = total + integrate_contribution(component_integrand(model, comp, cutoff, a), comp.sign);
  GenusSeries lhs = reduce_series(total, l);
  require_reduced(lhs, "F(t + a tau)");

  auto compare = [&](const std::string& name, const QSeries<LaurentZ>& x, const QSeries<LaurentZ>& y) {
    auto bad = first_mismatch(x, y);
    Cutoff w = min_cutoff(x.cutoff(), y.cutoff());
    if (bad)
      rep.add(name, false,
              "mismatch at q^" + to_string(*bad) + ": " + x.coefficient(*bad).str() + " vs " + y.coefficient(*bad).str());
    else
      rep.add(name, true, "window q^" + (w ? to_string(*w) : std::string("inf")));
  };
  compare("fixed-point recomputation at t + a tau", *lhs.reduced, rhs);
  return rep;
}

std::string genus_text(const GenusSeries& gs) {
  std::ostringstream out;
  out << "# l = " << gs.l << "\n";
  out << "# cutoff " << (gs.raw.cutoff() ? to_string(*gs.raw.cutoff()) : std::string("exact")) << "\n";
  if (gs.reduced_ok()) {
    if (gs.reduced->is_zero()) out << "# identically zero\n";
    for (const auto& [k, c] : gs.reduced->terms()) out << to_string(gs.reduced->exponent_of(k)) << "\t" << c.str() << "\n";
  } else {
    out << "# pole cancellation failed at " << gs.failures.size() << " coefficient(s)\n";
    for (const auto& [k, c] : gs.raw.terms()) out << to_string(gs.raw.exponent_of(k)) << "\t" << c.str() << "\n";
  }
  return out.str();
}

}  // namespace rlab
