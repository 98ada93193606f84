#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rlab/oracle.hpp"

#include <random>

using namespace rlab;

namespace {

std::string model_path(const std::string& name) { return std::string(RLAB_MODELS_DIR) + "/" + name + ".json"; }

FixedPointModel shipped(const std::string& name) { return load_model(model_path(name)); }

// prod (1 - q^n)^k as a dense integer vector up to q^n_max.
std::vector<long> euler_power(int k, int n_max) {
  std::vector<long> c(static_cast<std::size_t>(n_max) + 1, 0);
  c[0] = 1;
  for (int n = 1; n <= n_max; ++n)
    for (int j = 0; j < k; ++j)
      for (int e = n_max; e >= n; --e) c[e] -= c[e - n];
  return c;
}

LaurentZ w(int half_key) { return LaurentZ::monomial(CycRat(1L), half_key); }

RationalZ dirac_term(int m) { return RationalZ(LaurentZ(1L), w(m) - w(-m)); }

bool same_values(const QSeries<RationalZ>& a, const QSeries<RationalZ>& b) {
  return (a - b).is_zero() && a.cutoff() == b.cutoff();
}

std::string point_json(int m, const std::string& T, int sign = 1) {
  return R"({"type": "point", "m": [)" + std::to_string(m) + R"(], "T": [)" + T + R"(], "sign": )" +
         std::to_string(sign) + "}";
}

std::string two_point_model(const std::string& lattice, const std::string& a, const std::string& b) {
  return R"({"lattice": )" + lattice + R"(, "half_dim": 1, "components": [)" + a + ", " + b + "]}";
}

}  // namespace

TEST_CASE("shipped models load with the documented anomaly") {
  CHECK(anomaly_check(shipped("s2")) == -1);
  CHECK(anomaly_check(shipped("circle_bundle")) == 0);
  CHECK(anomaly_check(shipped("circle_bundle_vacuum")) == 0);
  CHECK(anomaly_check(shipped("circle_bundle_l1")) == 1);
  CHECK(anomaly_check(shipped("negative_control")) == -1);
  CHECK(anomaly_check(shipped("s2xs2")) == -1);

  auto cb = shipped("circle_bundle");
  CHECK(cb.lattice.rank == 1);
  CHECK(cb.lattice.gram[0][0] == 4);
  CHECK(cb.components.size() == 2);
  CHECK(cb.components[0].T[0] == ratio(1, 2));
  CHECK(cb.module.at(1) == 1);
  CHECK(cb.isolated());
  CHECK_FALSE(shipped("s2xs2").isolated());
  CHECK(shipped("s2xs2").components[0].dimension() == 2);
}

TEST_CASE("anomaly identities are enforced") {
  // l = 0 at one point, l = -1 at the other
  auto bad_l = model_from_json_text(
      two_point_model(R"({"rank": 1, "gram": [[4]]})", point_json(1, "\"1/2\""), point_json(-1, "0")));
  CHECK_THROWS_AS(anomaly_check(bad_l), AnomalyError);
  try {
    anomaly_check(bad_l);
  } catch (const AnomalyError& e) {
    CHECK(std::string(e.what()).find("inconsistent l") != std::string::npos);
  }

  // (T,U) = sum m x fails: nonzero normal root with T = 0
  auto bad_tu = model_from_json_text(R"({
    "lattice": {"rank": 0, "gram": []}, "half_dim": 2,
    "components": [{"type": "cp1-product", "m": [1], "chern": {"normal": [[[1]]]}}]})");
  CHECK_THROWS_WITH_AS(anomaly_check(bad_tu), doctest::Contains("(T,U)"), AnomalyError);

  // (U,U) fails: U = h1 + h2 on [[2]] gives 4 h1 h2, while the roots square to 0
  auto bad_uu = model_from_json_text(R"({
    "lattice": {"rank": 1, "gram": [[2]]}, "half_dim": 3,
    "components": [{"type": "cp1-product", "factors": 2, "m": [1], "T": [0], "chern": {"U": [[1, 1]]}}]})");
  CHECK_THROWS_WITH_AS(anomaly_check(bad_uu), doctest::Contains("(U,U)"), AnomalyError);

  // a consistent cp1 component: T = e/2 on [[4]], x = h, U = h/2
  // (T,U) = 4 * 1/2 * h/2 = h = m x;  (U,U) = 4 h^2/4 = 0 = (2h)^2 + h^2
  auto good = model_from_json_text(R"({
    "lattice": {"rank": 1, "gram": [[4]]}, "half_dim": 2,
    "components": [{"type": "cp1-product", "m": [1], "T": ["1/2"], "chern": {"normal": [[[1]]], "U": [["1/2"]]}}]})");
  CHECK(anomaly_check(good) == 0);
}

TEST_CASE("model files are validated with field diagnostics") {
  const std::string rank0 = R"({"rank": 0, "gram": []})";
  CHECK_THROWS_WITH_AS(model_from_json_text("{not json"), doctest::Contains("malformed"), ModelError);
  CHECK_THROWS_WITH_AS(model_from_json_text(R"({"half_dim": 1, "components": []})"), doctest::Contains("lattice"),
                       ModelError);
  CHECK_THROWS_WITH_AS(model_from_json_text(two_point_model(rank0, point_json(0, ""), point_json(1, ""))),
                       doctest::Contains("components[0].m[0]"), ModelError);
  CHECK_THROWS_WITH_AS(model_from_json_text(two_point_model(rank0, point_json(1, ""), point_json(1, "\"1\""))),
                       doctest::Contains("components[1].T"), ModelError);
  CHECK_THROWS_WITH_AS(
      model_from_json_text(R"({"lattice": )" + rank0 + R"(, "half_dim": 2, "components": [)" + point_json(1, "") + "]}"),
      doctest::Contains("half_dim"), ModelError);
  CHECK_THROWS_WITH_AS(model_from_json_text(R"({"lattice": )" + rank0 +
                                            R"(, "half_dim": 1, "components": [{"type": "torus", "m": [1]}]})"),
                       doctest::Contains("unknown component type"), ModelError);
  CHECK_THROWS_WITH_AS(model_from_json_text(R"({"lattice": )" + rank0 +
                                            R"(, "half_dim": 1, "components": [{"m": [1.5]}]})"),
                       doctest::Contains("components[0].m[0]"), ModelError);
  CHECK_THROWS_WITH_AS(model_from_json_text(R"({"lattice": "gram4", "module": 7, "half_dim": 1, "components": [)" +
                                            point_json(1, "0") + "]}"),
                       doctest::Contains("module"), ModelError);
  CHECK_THROWS_WITH_AS(model_from_json_text(R"({"lattice": {"rank": 1, "gram": [[3]]}, "half_dim": 1, "components": [)" +
                                            point_json(1, "0") + "]}"),
                       doctest::Contains("lattice"), ModelError);
  CHECK_THROWS_AS(load_model(model_path("does_not_exist")), ModelError);

  // standard lattice names and module combinations are accepted
  auto combo = model_from_json_text(R"({"lattice": "A2", "module": {"0": 1, "1": "1/2"}, "half_dim": 1,
    "components": [)" + point_json(1, "0, 0") + "]}");
  CHECK(combo.lattice.rank == 2);
  CHECK(combo.module.at(1) == ratio(1, 2));
}

TEST_CASE("S^2 and S^2 x S^2 vanish through q^6") {
  for (const char* name : {"s2", "s2xs2"}) {
    CAPTURE(name);
    auto gs = elliptic_genus(shipped(name), Rational(6));
    REQUIRE(gs.reduced_ok());
    CHECK(gs.reduced->is_zero());
    CHECK(gs.reduced->cutoff() == Rational(6));
    auto rep = rigidity_report(gs);
    CHECK(rep.passed());
    CHECK(rep.text().find("identically zero") != std::string::npos);
  }
}

TEST_CASE("circle bundle gives eta^2, rigid through q^6") {
  auto gs = elliptic_genus(shipped("circle_bundle"), Rational(6));
  REQUIRE(gs.reduced_ok());
  CHECK(rigidity_report(gs).passed());
  auto c = euler_power(2, 6);
  for (int n = 0; n <= 5; ++n) {
    CAPTURE(n);
    CHECK(gs.reduced->coefficient(ratio(1, 12) + n) == LaurentZ(c[static_cast<std::size_t>(n)]));
  }
  // nothing outside q^{1/12 + Z}
  for (const auto& [k, v] : gs.reduced->terms()) CHECK(frac_part(gs.reduced->exponent_of(k)) == ratio(1, 12));

  auto vac = elliptic_genus(shipped("circle_bundle_vacuum"), Rational(6));
  REQUIRE(vac.reduced_ok());
  CHECK(vac.reduced->is_zero());
}

TEST_CASE("lowest coefficient matches the weight-sum oracle") {
  for (const char* name : {"s2", "circle_bundle", "circle_bundle_vacuum", "circle_bundle_l1"}) {
    CAPTURE(name);
    auto model = shipped(name);
    auto gs = elliptic_genus(model, Rational(2));
    REQUIRE(gs.reduced_ok());
    auto [e, value] = weight_sum_oracle(model);
    Reduction r = reduce_rational(value);
    REQUIRE(r.ok());
    CHECK(gs.reduced->coefficient(e) == *r.value);
    if (gs.reduced->valuation()) CHECK(*gs.reduced->valuation() >= e);
  }
  auto [e, value] = weight_sum_oracle(shipped("circle_bundle"));
  CHECK(e == ratio(1, 12));
  CHECK(value == RationalZ(1L));
}

TEST_CASE("isolated point local term at q^0 is the Dirac term") {
  auto model = model_from_json_text(R"({"lattice": {"rank": 0, "gram": []}, "half_dim": 1,
    "components": [{"type": "point", "m": [1]}]})");
  auto f = integrate_contribution(local_contribution(model, 0, Rational(3)), 1);
  CHECK(f.coefficient(Rational(0)) == dirac_term(1));
  // q^1: Sym_q(L + L^-1 - 2) = z + z^-1 - 2
  CHECK(f.coefficient(Rational(1)) == dirac_term(1) * RationalZ(w(2) + w(-2) - LaurentZ(2L)));
  auto neg = integrate_contribution(local_contribution(model, 0, Rational(3)), -1);
  CHECK((f + neg).is_zero());
}

TEST_CASE("cp1 component with twisted normal bundle matches the Atiyah-Bott term") {
  // S^2 with normal bundle O(k), x = k h, m = 1, rank-0 lattice. At q^0:
  // integral of A(2h) / (w e^{kh/2} - w^{-1} e^{-kh/2}) = -(k/2)(w + w^{-1}) / (w - w^{-1})^2.
  for (int k : {-3, -1, 1, 2, 5}) {
    CAPTURE(k);
    auto model = model_from_json_text(R"({"lattice": {"rank": 0, "gram": []}, "half_dim": 2,
      "components": [{"type": "cp1-product", "m": [1], "chern": {"normal": [[[)" + std::to_string(k) + "]]]}}]}");
    auto f = integrate_contribution(local_contribution(model, 0, Rational(1)), 1);
    LaurentZ d = w(1) - w(-1);
    RationalZ expected(LaurentZ(CycRat(ratio(-k, 2))) * (w(1) + w(-1)), d * d);
    CHECK(f.coefficient(Rational(0)) == expected);
  }
}

TEST_CASE("negative control fails pole cancellation") {
  auto gs = elliptic_genus(shipped("negative_control"), Rational(4));
  CHECK_FALSE(gs.reduced_ok());
  REQUIRE_FALSE(gs.failures.empty());
  CHECK(gs.failures.front().first == Rational(0));
  auto rep = rigidity_report(gs);
  CHECK_FALSE(rep.passed());
  CHECK(rep.items().front().name == "pole cancellation");
  CHECK(genus_text(gs).find("pole cancellation failed") != std::string::npos);
}

TEST_CASE("l = 1 model is not rigid") {
  auto gs = elliptic_genus(shipped("circle_bundle_l1"), Rational(3));
  REQUIRE(gs.reduced_ok());
  CHECK_FALSE(rigidity_report(gs).passed());
  CHECK(gs.reduced->coefficient(ratio(49, 48)) == w(-2) - LaurentZ(1L) + w(2));
}

TEST_CASE("shift law with a = +-2") {
  for (const char* name : {"s2", "circle_bundle", "circle_bundle_l1", "s2xs2"}) {
    for (long a : {-2L, 2L}) {
      CAPTURE(name);
      CAPTURE(a);
      auto rep = shift_law_check(shipped(name), a, Rational(3));
      CHECK(rep.passed());
      CHECK(rep.items().size() == 1);
    }
  }
  auto zero = shift_law_check(shipped("circle_bundle"), 0, Rational(3));
  CHECK(zero.passed());
  CHECK(zero.items().front().detail == "identity");
  // a T = -e/2 moves K + e/4 to K - e/4
  CHECK_THROWS_AS(shift_law_check(shipped("circle_bundle"), -1, Rational(3)), PreconditionFailed);
}

TEST_CASE("bundle expansion oracle agrees through q^4 on shipped isolated models") {
  for (const char* name : {"s2", "circle_bundle", "circle_bundle_vacuum", "circle_bundle_l1", "negative_control"}) {
    CAPTURE(name);
    auto model = shipped(name);
    auto gs = elliptic_genus(model, Rational(4));
    auto oracle = bundle_expansion_oracle(model, Rational(4));
    CHECK(same_values(gs.raw, oracle));
  }
  CHECK_THROWS_AS(bundle_expansion_oracle(shipped("s2xs2"), Rational(2)), PreconditionFailed);
}

TEST_CASE("bundle expansion oracle agrees on random isolated data") {
  std::mt19937 rng(20261015);
  const std::vector<EvenLattice> lattices = {standard_lattice("gram4"), standard_lattice("A2"), validate({}, "C"),
                                             standard_lattice("gram6")};
  int nonzero = 0;
  for (int trial = 0; trial < 12; ++trial) {
    CAPTURE(trial);
    FixedPointModel model;
    model.lattice = lattices[static_cast<std::size_t>(trial) % lattices.size()];
    auto dd = discriminant_group(model.lattice);
    std::uniform_int_distribution<long> coset(0, dd.group_order - 1);
    model.module[static_cast<std::size_t>(coset(rng))] = 1;
    model.module[static_cast<std::size_t>(coset(rng))] += ratio(1, 3);
    model.half_dim = 1 + trial % 2;
    std::uniform_int_distribution<int> npts(1, 3), mdist(1, 3), sgn(0, 1), small(-1, 1);
    int points = npts(rng);
    for (int p = 0; p < points; ++p) {
      FixedComponent comp;
      comp.label = "p" + std::to_string(p);
      comp.cohomology = NilpotentModel::point();
      for (int j = 0; j < model.half_dim; ++j) {
        NormalSummand ns;
        ns.m = mdist(rng) * (sgn(rng) ? 1 : -1);
        ns.roots.push_back(Nilpotent<Rational>(Rational(0)));
        comp.normals.push_back(ns);
      }
      // T in K/2 keeps every (T, g) half-integral
      comp.T = model.lattice.zero();
      for (auto& t : comp.T) t = ratio(small(rng) + 2 * small(rng), 2);
      comp.U.assign(static_cast<std::size_t>(model.lattice.rank), Nilpotent<Rational>(Rational(0)));
      comp.sign = sgn(rng) ? 1 : -1;
      model.components.push_back(comp);
    }
    const Rational order(2);
    QSeries<RationalZ> engine(1, order);
    for (std::size_t i = 0; i < model.components.size(); ++i)
      engine = engine + integrate_contribution(local_contribution(model, i, order), model.components[i].sign);
    CHECK(same_values(engine, bundle_expansion_oracle(model, order)));
    nonzero += engine.is_zero() ? 0 : 1;
  }
  CHECK(nonzero >= 10);
}

TEST_CASE("z -> 1/z symmetry with coefficient conjugation") {
  for (const char* name : {"s2", "circle_bundle", "circle_bundle_l1"}) {
    CAPTURE(name);
    auto gs = elliptic_genus(shipped(name), Rational(4));
    REQUIRE(gs.reduced_ok());
    auto flipped = gs.reduced->map([](const LaurentZ& c) { return c.invert_variable().conj_coefficients(); });
    CHECK_FALSE(first_mismatch(*gs.reduced, flipped));
  }
}

TEST_CASE("genus text lists one coefficient per line") {
  auto gs = elliptic_genus(shipped("circle_bundle"), Rational(2));
  std::string text = genus_text(gs);
  CHECK(text.find("# l = 0") == 0);
  CHECK(text.find("1/12\t1\n") != std::string::npos);
  CHECK(text.find("13/12\t-2\n") != std::string::npos);
}
