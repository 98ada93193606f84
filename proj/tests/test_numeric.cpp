#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rlab/numeric_checks.hpp"
#include "rlab/theta.hpp"

#include <cmath>

using namespace rlab;

namespace {

const cplx kI(0.0, 1.0);

FixedPointModel shipped(const std::string& name) {
  return load_model(std::string(RLAB_MODELS_DIR) + "/" + name + ".json");
}

cplx engine_value(const FixedPointModel& model, std::size_t comp, cplx t, cplx tau, int order = 14) {
  auto f = integrate_contribution(local_contribution(model, comp, Rational(order)), model.components[comp].sign);
  EvalResult r = eval(f, tau, t);
  CHECK(r.tail_bound < 1e-12);
  return r.value;
}

double theta_s_discrepancy(cplx t, cplx tau, int order) {
  auto th = jacobi_theta(Rational(order));
  cplx lhs = eval(th, -1.0 / tau, t / tau).value;
  cplx rhs = -kI * std::sqrt(tau / kI) * std::exp(M_PI * kI * t * t / tau) * eval(th, tau, t).value;
  return std::abs(lhs - rhs);
}

}  // namespace

TEST_CASE("eval of a geometric series") {
  QSeries<Rational> s(1, Rational(30));
  for (int n = 0; n <= 30; ++n) s.add_term(Rational(n), Rational(1));
  EvalResult r = eval(s, kI);
  const double exact = 1.0 / (1.0 - std::exp(-2.0 * M_PI));
  CHECK(std::abs(r.value - exact) <= r.tail_bound + 1e-15);
  CHECK(r.tail_bound > 0.0);
  CHECK_FALSE(r.warn);
  CHECK_THROWS_AS(eval(s, cplx(0.3, 0.0)), std::domain_error);
}

TEST_CASE("eval of eta matches the direct product") {
  EvalResult r = eval(dedekind_eta(Rational(20)), kI);
  cplx prod = std::exp(-2.0 * M_PI / 24.0);
  for (int p = 1; p < 60; ++p) prod *= 1.0 - std::exp(-2.0 * M_PI * p);
  CHECK(std::abs(r.value - prod) < 1e-12);
  CHECK(std::abs(eta_value(kI) - prod) < 1e-14);
}

TEST_CASE("eval near |q| = 1 warns") {
  EvalResult r = eval(dedekind_eta(Rational(10)), cplx(0.0, 0.01));
  CHECK(r.warn);
  CHECK(r.tail_bound > 1e-2);
}

TEST_CASE("eval agrees with coefficientwise specialization") {
  QSeries<CycRat> s(3, Rational(5));
  for (int k = 0; k <= 15; ++k) s.add_term(ratio(k, 3), root_of_unity(ratio(k * k, 7)) * CycRat(Rational(k + 1)));
  const cplx tau(0.17, 0.8);
  cplx direct = 0.0;
  for (const auto& [k, c] : s.terms()) direct += c.to_complex() * std::exp(2.0 * M_PI * kI * tau * s.exponent_of(k).get_d());
  CHECK(std::abs(eval(s, tau).value - direct) < 1e-12);
}

TEST_CASE("theta S-transformation") {
  CHECK(theta_S_check(0.3, cplx(0.2, 1.1), 1e-8).passed());
  CHECK(theta_S_check(0.25, kI, 1e-9).passed());
  CHECK(theta_S_check(0.0, kI, 1e-9).passed());
  CHECK(theta_S_check(cplx(0.1, 0.2), cplx(-0.4, 0.9), 1e-8).passed());
  // a wrong branch of the square root would flip the sign
  auto th = jacobi_theta(Rational(40));
  const cplx t = 0.3, tau(0.2, 1.1);
  cplx lhs = eval(th, -1.0 / tau, t / tau).value;
  cplx wrong = kI * std::sqrt(tau / kI) * std::exp(M_PI * kI * t * t / tau) * eval(th, tau, t).value;
  CHECK(std::abs(lhs - wrong) > 0.1 * std::abs(lhs));
}

TEST_CASE("theta S-discrepancy decreases with the order") {
  const cplx t(0.3, 0.05), tau(0.2, 0.9);
  double prev = theta_s_discrepancy(t, tau, 1);
  for (int order = 2; order <= 4; ++order) {
    double d = theta_s_discrepancy(t, tau, order);
    CAPTURE(order);
    CHECK(d <= prev);
    prev = d;
  }
  CHECK(theta_s_discrepancy(t, tau, 12) < theta_s_discrepancy(t, tau, 2));
}

TEST_CASE("numeric lattice theta agrees with the exact series") {
  auto L = standard_lattice("A2");
  auto dd = discriminant_group(L);
  const RatVec h = {ratio(1, 5), ratio(-2, 7)};
  const cplx tau(0.1, 0.7);
  for (std::size_t g = 0; g < dd.coset_reps.size(); ++g) {
    CAPTURE(g);
    auto exact = theta_series(L, dd.coset_reps[g], ExpCharacter::rational(h), std::nullopt, Rational(40));
    cplx num = lattice_theta_value(L, dd.coset_reps[g], {h[0].get_d(), h[1].get_d()}, tau);
    CHECK(std::abs(eval(exact, tau).value - num) < 1e-12);
  }
  auto C = validate({}, "C");
  CHECK(std::abs(character_value(C, {}, {}, kI) - 1.0) < 1e-15);
}

TEST_CASE("character S-matrices") {
  SUBCASE("A1 is the Hadamard matrix over sqrt 2") {
    auto r = character_S_matrix(standard_lattice("A1"), kI, 1e-6);
    CHECK(r.report.passed());
    const double s = 1.0 / std::sqrt(2.0);
    const double expected[2][2] = {{s, s}, {s, -s}};
    for (int g = 0; g < 2; ++g)
      for (int h = 0; h < 2; ++h) CHECK(std::abs(r.S[g][h] - expected[g][h]) < 1e-6);
  }
  SUBCASE("E8 has a single module") {
    auto r = character_S_matrix(standard_lattice("E8"), kI, 1e-6);
    CHECK(r.report.passed());
    REQUIRE(r.S.size() == 1);
    CHECK(std::abs(r.S[0][0] - 1.0) < 1e-6);
  }
  SUBCASE("symmetric and unitary for the shipped lattices") {
    for (const char* name : {"A2", "D4", "gram4", "gram8"}) {
      CAPTURE(name);
      auto r = character_S_matrix(standard_lattice(name), cplx(0.05, 1.1), 1e-6, 7);
      CHECK(r.report.passed());
    }
  }
  SUBCASE("gram4 against characters of K + j e/4") {
    // (j e/4, k e/4) = j k / 4
    auto r = character_S_matrix(standard_lattice("gram4"), kI, 1e-6);
    auto dd = discriminant_group(standard_lattice("gram4"));
    for (std::size_t g = 0; g < 4; ++g)
      for (std::size_t h = 0; h < 4; ++h) {
        double jg = dd.coset_reps[g][0].get_d() * 4, jh = dd.coset_reps[h][0].get_d() * 4;
        cplx expected = 0.5 * std::exp(-2.0 * M_PI * kI * jg * jh / 4.0);
        CHECK(std::abs(r.S[g][h] - expected) < 1e-6);
      }
  }
}

TEST_CASE("local contribution against direct evaluation with floating-point theta") {
  const cplx t = 0.17, tau(0.0, 1.3);
  SUBCASE("isolated point, A1 vacuum module") {
    auto m = model_from_json_text(R"({"lattice": "A1", "module": 0, "half_dim": 1,
      "components": [{"m": [1], "T": [0]}]})");
    cplx e = engine_value(m, 0, t, tau);
    cplx d = component_value_direct(m, 0, m.module, t, tau);
    CHECK(std::abs(e - d) < 1e-8 * std::abs(d));
  }
  SUBCASE("isolated point with T and a weighted module") {
    auto m = model_from_json_text(R"({"lattice": "A2", "module": {"1": 1, "2": "-1/3"}, "half_dim": 2,
      "components": [{"m": [2, -1], "T": ["1", "-1"], "sign": -1}]})");
    cplx e = engine_value(m, 0, cplx(0.11, 0.03), cplx(0.2, 1.1));
    cplx d = component_value_direct(m, 0, m.module, cplx(0.11, 0.03), cplx(0.2, 1.1));
    CHECK(std::abs(e - d) < 1e-8 * std::abs(d));
  }
  SUBCASE("cp1 components with normal and lattice classes") {
    auto m = model_from_json_text(R"({"lattice": {"rank": 1, "gram": [[4]]}, "module": 1, "half_dim": 3,
      "components": [{"type": "cp1-product", "factors": 2, "m": [1], "T": ["1/2"],
                      "chern": {"normal": [[[1, -2]]], "U": [["1/2", 3]]}}]})");
    cplx e = engine_value(m, 0, t, tau);
    cplx d = component_value_direct(m, 0, m.module, t, tau);
    CHECK(std::abs(e - d) < 1e-8 * std::abs(d));
  }
  SUBCASE("shipped models, summed") {
    for (const char* name : {"circle_bundle", "circle_bundle_l1", "s2xs2", "negative_control"}) {
      CAPTURE(name);
      auto m = shipped(name);
      cplx e = 0.0;
      for (std::size_t i = 0; i < m.components.size(); ++i) e += engine_value(m, i, cplx(0.23, -0.04), cplx(0.1, 1.2));
      cplx d = genus_value_direct(m, m.module, cplx(0.23, -0.04), cplx(0.1, 1.2));
      CHECK(std::abs(e - d) < 1e-8 * std::max(1.0, std::abs(d)));
    }
  }
}

TEST_CASE("Jacobi form law") {
  auto cb = shipped("circle_bundle");
  const std::vector<std::pair<cplx, cplx>> pts = {
      {0.2, cplx(0.0, 1.5)}, {cplx(0.13, 0.05), cplx(0.1, 1.2)}, {cplx(-0.31, 0.02), cplx(-0.2, 1.1)}};
  CHECK(jacobi_form_check(cb, {0, -1, 1, 0}, pts, 1e-5, 30).passed());
  auto t_rep = jacobi_form_check(cb, {1, 1, 0, 1}, pts, 1e-9, 30);
  CHECK(t_rep.passed());
  CHECK(t_rep.items().back().name == "exact T-phase of the series");
  CHECK(jacobi_form_check(cb, {1, 0, 0, 1}, pts, 1e-9, 10).passed());
  CHECK(jacobi_form_check(cb, {2, 1, 1, 1}, pts, 1e-5, 30).passed());
  CHECK(jacobi_form_check(cb, {-1, 0, 0, -1}, pts, 1e-5, 30).passed());
  CHECK(jacobi_form_check(shipped("circle_bundle_l1"), {0, -1, 1, 0}, pts, 1e-5, 30).passed());
  CHECK(jacobi_form_check(shipped("circle_bundle_l1"), {1, -2, 1, -1}, pts, 1e-5, 30).passed());
  CHECK_THROWS_AS(jacobi_form_check(cb, {1, 1, 1, 1}, pts, 1e-5, 10), std::invalid_argument);
}

TEST_CASE("Jacobi form law for a module mixing two cosets") {
  auto cb = shipped("circle_bundle");
  cb.module = {{1, Rational(1)}, {3, ratio(-1, 2)}};
  const std::vector<std::pair<cplx, cplx>> pts = {{0.2, cplx(0.0, 1.5)}, {cplx(0.1, 0.1), cplx(0.3, 1.0)}};
  CHECK(jacobi_form_check(cb, {0, -1, 1, 0}, pts, 1e-5, 30).passed());
  CHECK(jacobi_form_check(cb, {1, 1, 0, 1}, pts, 1e-9, 30).passed());
}

TEST_CASE("winding numbers") {
  CHECK(winding_number(elliptic_genus(shipped("circle_bundle"), Rational(30)), kI, 64) == 0);
  CHECK(winding_number(elliptic_genus(shipped("circle_bundle_l1"), Rational(30)), kI, 64) == 4);
  auto f = [](cplx t) { return std::exp(2.0 * M_PI * kI * t) - 0.5; };
  CHECK(winding_count(f, {-0.5, 0.5, cplx(0.5, 1.0), cplx(-0.5, 1.0)}, 32) == 1);
  CHECK(std::abs(winding_along(f, {-0.5, 0.5, cplx(0.5, 1.0), cplx(-0.5, 1.0)}, 32) - 1.0) < 1e-9);
  auto g = [](cplx t) { return std::exp(2.0 * M_PI * kI * t) - 1.0; };
  CHECK_THROWS_AS(winding_count(g, {0.0, 1.0, cplx(1.0, 1.0), cplx(0.0, 1.0)}, 32), NumericError);
  CHECK_THROWS_AS(winding_number(elliptic_genus(shipped("s2"), Rational(10)), kI, 16), PreconditionFailed);
  CHECK_THROWS_AS(winding_number(elliptic_genus(shipped("negative_control"), Rational(4)), kI, 16),
                  PreconditionFailed);
}
