#include "rlab/lattice.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace rlab {

namespace {

using IntegerMatrix = std::vector<std::vector<Integer>>;

IntegerMatrix identity(std::size_t n) {
  IntegerMatrix m(n, std::vector<Integer>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

RatMatrix rational_inverse(RatMatrix a) {
  const std::size_t n = a.size();
  RatMatrix inv(n, RatVec(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw std::domain_error("singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    Rational p = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      Rational f = a[i][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[col][j];
        inv[i][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

/// LDL^T pivots; all positive iff positive definite.
bool positive_definite(const IntMatrix& g) {
  const std::size_t n = g.size();
  RatMatrix a(n, RatVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = g[i][j];
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      Rational f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return true;
}

/// Upper-triangular Fincke-Pohst data: Q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2.
std::vector<std::vector<double>> fp_decomposition(const IntMatrix& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<double>> q(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q[i][j] = static_cast<double>(g[i][j]);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      q[j][i] = q[i][j];
      q[i][j] /= q[i][i];
    }
    for (std::size_t k = i + 1; k < n; ++k)
      for (std::size_t l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
  }
  return q;
}

std::vector<long> scaled_integer(const RatVec& v, long d) {
  std::vector<long> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_long_exact(v[i] * d);
  return out;
}

/// (f, g) = (w . y) / scale for g = y / d; w = e G f with e the denominator of G f.
struct LinearForm {
  std::vector<long> w;
  long scale = 1;

  LinearForm(const EvenLattice& L, const RatVec& f, long d) {
    RatVec gf(static_cast<std::size_t>(L.rank), Rational(0));
    for (int i = 0; i < L.rank; ++i)
      for (int j = 0; j < L.rank; ++j) gf[i] += Rational(L.gram[i][j]) * f[j];
    long e = common_denominator(gf);
    w = scaled_integer(gf, e);
    scale = e * d;
  }
  long apply(const std::vector<long>& y) const {
    long acc = 0;
    for (std::size_t i = 0; i < y.size(); ++i) acc += w[i] * y[i];
    return acc;
  }
};

long norm_scaled(const IntMatrix& g, const std::vector<long>& y) {
  long acc = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    long row = 0;
    for (std::size_t j = 0; j < y.size(); ++j) row += g[i][j] * y[j];
    acc += y[i] * row;
  }
  return acc;
}

void check_dim(const EvenLattice& L, const RatVec& v, const char* what) {
  if (static_cast<int>(v.size()) != L.rank)
    throw std::invalid_argument(std::string(what) + " has " + std::to_string(v.size()) + " coordinates, lattice rank is " +
                                std::to_string(L.rank));
}

RatVec add(const RatVec& a, const RatVec& b) {
  RatVec out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

/// Groups the points of K + offset (norm/2 <= bound) by norm and by the values of `forms`.
std::map<std::vector<long>, long> grouped_points(const EvenLattice& L, const RatVec& offset, const Rational& bound,
                                                 const std::vector<LinearForm>& forms) {
  std::map<std::vector<long>, long> groups;
  std::vector<long> key(forms.size() + 1);
  for_each_point(L, offset, bound, [&](const std::vector<long>& y) {
    key[0] = norm_scaled(L.gram, y);
    for (std::size_t j = 0; j < forms.size(); ++j) key[j + 1] = forms[j].apply(y);
    ++groups[key];
  });
  return groups;
}

}  // namespace

Rational EvenLattice::pair(const RatVec& a, const RatVec& b) const {
  if (static_cast<int>(a.size()) != rank || static_cast<int>(b.size()) != rank)
    throw std::invalid_argument("vector length does not match lattice rank");
  Rational acc = 0;
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j)
      if (gram[i][j] != 0) acc += a[i] * Rational(gram[i][j]) * b[j];
  return acc;
}

RatVec EvenLattice::basis_vector(int i) const {
  RatVec v = zero();
  v.at(static_cast<std::size_t>(i)) = 1;
  return v;
}

EvenLattice validate(const IntMatrix& gram, std::string name) {
  const std::size_t n = gram.size();
  for (const auto& row : gram)
    if (row.size() != n) throw InvalidLattice("gram matrix is not square");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (gram[i][j] != gram[j][i]) throw InvalidLattice("gram matrix is not symmetric");
    if (gram[i][i] % 2 != 0) throw InvalidLattice("odd diagonal entry: lattice is not even");
  }
  if (!positive_definite(gram)) throw InvalidLattice("gram matrix is not positive definite");
  EvenLattice L;
  L.rank = static_cast<int>(n);
  L.gram = gram;
  L.name = std::move(name);
  return L;
}

EvenLattice lattice_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidLattice(std::string("malformed lattice JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidLattice("lattice JSON must be an object");
  if (!j.contains("gram")) throw InvalidLattice("field 'gram' missing");
  const auto& g = j["gram"];
  if (!g.is_array()) throw InvalidLattice("field 'gram' must be an array");
  long rank = -1;
  if (j.contains("rank")) {
    if (!j["rank"].is_number_integer() || j["rank"].get<long>() < 0)
      throw InvalidLattice("field 'rank' must be a nonnegative integer");
    rank = j["rank"].get<long>();
  }
  for (const auto& row : g) {
    bool ok = row.is_number_integer();
    if (row.is_array()) {
      ok = true;
      for (const auto& x : row) ok = ok && x.is_number_integer();
    }
    if (!ok) throw InvalidLattice("field 'gram': entries must be integers");
  }
  IntMatrix m;
  try {
    if (!g.empty() && g[0].is_array()) {
      m = g.get<IntMatrix>();
    } else {
      auto flat = g.get<std::vector<long>>();
      if (rank < 0) {
        rank = std::lround(std::sqrt(static_cast<double>(flat.size())));
      }
      if (static_cast<std::size_t>(rank * rank) != flat.size())
        throw InvalidLattice("field 'gram': " + std::to_string(flat.size()) + " entries do not form a " +
                             std::to_string(rank) + "x" + std::to_string(rank) + " matrix");
      m.assign(static_cast<std::size_t>(rank), std::vector<long>(static_cast<std::size_t>(rank)));
      for (long i = 0; i < rank; ++i)
        for (long k = 0; k < rank; ++k) m[i][k] = flat[static_cast<std::size_t>(i * rank + k)];
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidLattice(std::string("field 'gram': entries must be integers (") + e.what() + ")");
  }
  if (rank >= 0 && static_cast<long>(m.size()) != rank)
    throw InvalidLattice("field 'rank' = " + std::to_string(rank) + " but 'gram' has " + std::to_string(m.size()) +
                         " rows");
  std::string name = j.value("name", std::string());
  return validate(m, name);
}

EvenLattice load_lattice(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidLattice("cannot open lattice file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return lattice_from_json_text(ss.str());
}

std::string lattice_json(const EvenLattice& L) {
  nlohmann::json j;
  if (!L.name.empty()) j["name"] = L.name;
  j["rank"] = L.rank;
  j["gram"] = L.gram;
  return j.dump();
}

EvenLattice standard_lattice(const std::string& name) {
  if (name == "A1") return validate({{2}}, "A1");
  if (name == "A2") return validate({{2, -1}, {-1, 2}}, "A2");
  if (name == "D4") return validate({{2, -1, 0, 0}, {-1, 2, -1, -1}, {0, -1, 2, 0}, {0, -1, 0, 2}}, "D4");
  if (name == "E8") {
    IntMatrix g(8, std::vector<long>(8, 0));
    for (int i = 0; i < 8; ++i) g[i][i] = 2;
    const int edges[7][2] = {{1, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {2, 4}};
    for (const auto& e : edges) g[e[0] - 1][e[1] - 1] = g[e[1] - 1][e[0] - 1] = -1;
    return validate(g, "E8");
  }
  if (name.rfind("gram", 0) == 0) {
    long n = std::stol(name.substr(4));
    return validate({{n}}, name);
  }
  throw InvalidLattice("unknown standard lattice '" + name + "'");
}

Integer determinant(const IntMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  IntegerMatrix a(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
  // Bareiss fraction-free elimination
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

RatMatrix inverse_matrix(const IntMatrix& m) {
  RatMatrix a(m.size(), RatVec(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) a[i][j] = m[i][j];
  return rational_inverse(a);
}

SmithForm smith_normal_form(const IntMatrix& in) {
  const std::size_t rows = in.size(), cols = rows ? in[0].size() : 0;
  IntegerMatrix a(rows, std::vector<Integer>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = in[i][j];
  IntegerMatrix U = identity(rows), V = identity(cols);

  auto row_axpy = [&](std::size_t dst, std::size_t src, const Integer& f) {  // row_dst -= f row_src
    for (std::size_t j = 0; j < cols; ++j) a[dst][j] -= f * a[src][j];
    for (std::size_t j = 0; j < rows; ++j) U[dst][j] -= f * U[src][j];
  };
  auto col_axpy = [&](std::size_t dst, std::size_t src, const Integer& f) {
    for (std::size_t i = 0; i < rows; ++i) a[i][dst] -= f * a[i][src];
    for (std::size_t i = 0; i < cols; ++i) V[i][dst] -= f * V[i][src];
  };
  auto swap_rows = [&](std::size_t x, std::size_t y) {
    std::swap(a[x], a[y]);
    std::swap(U[x], U[y]);
  };
  auto swap_cols = [&](std::size_t x, std::size_t y) {
    for (auto& r : a) std::swap(r[x], r[y]);
    for (auto& r : V) std::swap(r[x], r[y]);
  };

  const std::size_t n = std::min(rows, cols);
  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      // smallest nonzero entry of the trailing block
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (pi == rows || abs(a[i][j]) < abs(a[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi == rows) break;
      swap_rows(t, pi);
      swap_cols(t, pj);
      bool dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        row_axpy(i, t, Integer(a[i][t] / a[t][t]));
        dirty = dirty || a[i][t] != 0;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        col_axpy(j, t, Integer(a[t][j] / a[t][t]));
        dirty = dirty || a[t][j] != 0;
      }
      if (dirty) continue;
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      row_axpy(t, bad, Integer(-1));
    }
    if (a[t][t] < 0) {
      for (auto& x : a[t]) x = -x;
      for (auto& x : U[t]) x = -x;
    }
  }
  SmithForm s;
  s.U = std::move(U);
  s.V = std::move(V);
  for (std::size_t t = 0; t < n; ++t) s.d.push_back(a[t][t]);
  return s;
}

DualData discriminant_group(const EvenLattice& L) {
  DualData dd;
  const std::size_t n = static_cast<std::size_t>(L.rank);
  if (n == 0) {
    dd.coset_reps.push_back({});
    return dd;
  }
  dd.gram_inverse = inverse_matrix(L.gram);
  SmithForm s = smith_normal_form(L.gram);
  dd.smith_v = s.V;
  dd.smith_d = s.d;
  RatMatrix vr(n, RatVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) vr[i][j] = s.V[i][j];
  RatMatrix vi = rational_inverse(vr);
  dd.smith_v_inverse.assign(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (vi[i][j].get_den() != 1) throw std::logic_error("Smith transform is not unimodular");
      dd.smith_v_inverse[i][j] = vi[i][j].get_num();
    }
  long order = 1;
  for (const auto& d : s.d) {
    long di = to_long(d);
    order *= di;
    if (di > 1) dd.invariants.push_back(di);
  }
  dd.group_order = order;
  if (Integer(order) != determinant(L.gram)) throw std::logic_error("Smith form disagrees with determinant");

  std::vector<long> a(n, 0);
  for (long idx = 0; idx < order; ++idx) {
    RatVec beta(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (a[j] != 0) beta[i] += Rational(s.V[i][j]) * ratio(a[j], to_long(s.d[j]));
    dd.coset_reps.push_back(std::move(beta));
    for (std::size_t j = n; j-- > 0;) {  // last coordinate fastest
      if (++a[j] < to_long(s.d[j])) break;
      a[j] = 0;
    }
  }
  return dd;
}

std::size_t DualData::coset_of(const RatVec& x) const {
  const std::size_t n = smith_d.size();
  if (x.size() != n) throw std::invalid_argument("vector length does not match lattice rank");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Rational ai = 0;
    for (std::size_t j = 0; j < n; ++j) ai += Rational(smith_v_inverse[i][j]) * x[j];
    ai *= Rational(smith_d[i]);
    if (ai.get_den() != 1) throw std::invalid_argument("vector " + to_string(x) + " is not in the dual lattice");
    Integer r = ai.get_num() % smith_d[i];
    if (r < 0) r += smith_d[i];
    idx = idx * static_cast<std::size_t>(to_long(smith_d[i])) + static_cast<std::size_t>(to_long(r));
  }
  return idx;
}

long common_denominator(const RatVec& v) {
  long d = 1;
  for (const auto& x : v) d = lcm_long(d, denominator_of(x));
  return d;
}

void for_each_point(const EvenLattice& L, const RatVec& offset, const Rational& bound,
                    const std::function<void(const std::vector<long>&)>& f) {
  check_dim(L, offset, "offset");
  if (bound < 0) return;
  const std::size_t n = static_cast<std::size_t>(L.rank);
  if (n == 0) {
    f({});
    return;
  }
  const long d = common_denominator(offset);
  const std::vector<long> b = scaled_integer(offset, d);
  const Rational exact_limit = 2 * bound * d * d;
  const long limit = to_long(floor_of(exact_limit));
  const auto q = fp_decomposition(L.gram);
  const double budget = 2.0 * bound.get_d() * (1.0 + 1e-9) + 1e-9;

  std::vector<double> x(n, 0.0);
  std::vector<long> y(n, 0);
  std::vector<double> beta(n);
  for (std::size_t i = 0; i < n; ++i) beta[i] = offset[i].get_d();

  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double rem) {
    double c = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) c -= q[i][j] * x[j];
    double r = std::sqrt(std::max(rem, 0.0) / q[i][i]) + 1e-9;
    long lo = static_cast<long>(std::ceil(c - r - beta[i]));
    long hi = static_cast<long>(std::floor(c + r - beta[i]));
    for (long k = lo; k <= hi; ++k) {
      x[i] = static_cast<double>(k) + beta[i];
      y[i] = k * d + b[i];
      double t = x[i] - c;
      double used = q[i][i] * t * t;
      if (used > rem + 1e-9) continue;
      if (i == 0) {
        if (norm_scaled(L.gram, y) <= limit) f(y);
      } else {
        rec(i - 1, rem - used);
      }
    }
  };
  rec(n - 1, budget);
}

std::vector<RatVec> enumerate(const EvenLattice& L, const RatVec& offset, const Rational& bound) {
  std::vector<std::vector<long>> ys;
  for_each_point(L, offset, bound, [&](const std::vector<long>& y) { ys.push_back(y); });
  std::sort(ys.begin(), ys.end());
  const long d = common_denominator(offset);
  std::vector<RatVec> out;
  out.reserve(ys.size());
  for (const auto& y : ys) {
    RatVec v(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) v[i] = ratio(y[i], d);
    out.push_back(std::move(v));
  }
  return out;
}

ExpCharacter ExpCharacter::rational(RatVec h) {
  ExpCharacter e;
  e.kind = Kind::rational;
  e.h = std::move(h);
  return e;
}

ExpCharacter ExpCharacter::genus(RatVec t, std::vector<std::pair<Nilpotent<Rational>, RatVec>> u) {
  ExpCharacter e;
  e.kind = Kind::genus;
  e.t = std::move(t);
  e.u = std::move(u);
  return e;
}

QSeries<CycRat> theta_series(const EvenLattice& L, const RatVec& coset_rep, const ExpCharacter& phase,
                             const std::optional<RatVec>& tau_shift, const Rational& cutoff) {
  check_dim(L, coset_rep, "coset representative");
  if (phase.kind == ExpCharacter::Kind::genus) throw std::invalid_argument("use genus_theta_series for the genus phase");
  const RatVec alpha = tau_shift ? *tau_shift : L.zero();
  check_dim(L, alpha, "tau shift");
  const Rational shift_norm = L.norm(alpha) / 2;
  const RatVec offset = add(coset_rep, alpha);
  const long d = common_denominator(offset);

  std::vector<LinearForm> forms;
  Rational h_alpha = 0;
  const bool has_h = phase.kind == ExpCharacter::Kind::rational;
  if (has_h) {
    check_dim(L, phase.h, "h");
    forms.emplace_back(L, phase.h, d);
    h_alpha = L.pair(phase.h, alpha);
  }
  auto groups = grouped_points(L, offset, cutoff + shift_norm, forms);

  QSeries<CycRat> s(1, cutoff);
  for (const auto& [key, count] : groups) {
    Rational e = ratio(key[0], 2 * d * d) - shift_norm;
    CycRat c(count);
    if (has_h) c = c * root_of_unity(ratio(key[1], forms[0].scale) - h_alpha);
    s.add_term(e, c);
  }
  return s;
}

QSeries<Nilpotent<LaurentZ>> genus_theta_series(const EvenLattice& L, const RatVec& coset_rep,
                                                const ExpCharacter& phase, const Rational& cutoff,
                                                const std::optional<RatVec>& tau_shift) {
  check_dim(L, coset_rep, "coset representative");
  if (phase.kind != ExpCharacter::Kind::genus) throw std::invalid_argument("genus_theta_series needs a genus phase");
  check_dim(L, phase.t, "T");
  const RatVec alpha = tau_shift ? *tau_shift : L.zero();
  check_dim(L, alpha, "tau shift");
  const Rational shift_norm = L.norm(alpha) / 2;
  const RatVec offset = add(coset_rep, alpha);
  const long d = common_denominator(offset);
  std::vector<LinearForm> forms;
  std::vector<Rational> at_alpha;
  forms.emplace_back(L, phase.t, d);
  at_alpha.push_back(L.pair(phase.t, alpha));
  for (const auto& [n, u] : phase.u) {
    check_dim(L, u, "U component");
    forms.emplace_back(L, u, d);
    at_alpha.push_back(L.pair(u, alpha));
  }
  auto groups = grouped_points(L, offset, cutoff + shift_norm, forms);

  NilModelPtr model;
  for (const auto& [n, u] : phase.u)
    if (n.model()) model = n.model();

  QSeries<Nilpotent<LaurentZ>> s(1, cutoff);
  for (const auto& [key, count] : groups) {
    Rational e = ratio(key[0], 2 * d * d) - shift_norm;
    LaurentZ zt = LaurentZ::z_pow(ratio(key[1], forms[0].scale) - at_alpha[0]) * LaurentZ(CycRat(count));
    Nilpotent<Rational> arg = Nilpotent<Rational>::constant(model, Rational(0));
    for (std::size_t j = 0; j < phase.u.size(); ++j)
      arg += phase.u[j].first * Nilpotent<Rational>(ratio(key[j + 2], forms[j + 1].scale) - at_alpha[j + 1]);
    Nilpotent<LaurentZ> c = arg.exp().map([](const Rational& r) { return LaurentZ(CycRat(r)); }) *
                            Nilpotent<LaurentZ>(zt);
    s.add_term(e, c);
  }
  return s;
}

}  // namespace rlab
