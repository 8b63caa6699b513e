#include <doctest.h>

#include <fstream>
#include <random>

#include "imexglm/errors.hpp"
#include "imexglm/method_io.hpp"
#include "imexglm/methods.hpp"
#include "imexglm/order_conditions.hpp"
#include "imexglm/validation.hpp"
#include "test_support.hpp"

using namespace imexglm;

namespace {

double product_oracle(const VectorXd& c, Eigen::Index j, double x) {
  double p = 1.0;
  for (Eigen::Index k = 0; k < c.size(); ++k)
    if (k != j) p *= x - c(k);
  return p;
}

VectorXd random_distinct_nodes(std::mt19937_64& rng, int s) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    VectorXd c(s);
    for (int k = 0; k < s; ++k) c(k) = u(rng);
    bool ok = true;
    for (int i = 0; i < s; ++i)
      for (int j = i + 1; j < s; ++j) ok = ok && std::abs(c(i) - c(j)) > 0.05;
    if (ok) return c;
  }
}

// A small valid pair: explicit A = 0, implicit A = lambda I on c = [0, 1].
ImexGlmMethod two_stage_pair(const VectorXd& v) {
  VectorXd c(2);
  c << 0.0, 1.0;
  const MatrixXd A = MatrixXd::Zero(2, 2);
  const MatrixXd Ahat = 0.5 * MatrixXd::Identity(2, 2);
  return make_dimsim_pair("pair", c, A, dimsim_b_matrix(A, c, v), Ahat, dimsim_b_matrix(Ahat, c, v), v,
                          starting_weight_matrix(A, c, 2), starting_weight_matrix(Ahat, c, 2));
}

}  // namespace

TEST_SUITE("glm-core") {

TEST_CASE("nodal polynomials of one and two nodes") {
  const auto one = nodal_polynomials(VectorXd::Zero(1));
  CHECK(one.coefficients(0, 0) == 1.0);
  CHECK(one.at_own_node(0) == 1.0);
  CHECK(one.integral_to_shifted(0, 0) == doctest::Approx(1.0));

  VectorXd c(2);
  c << 0.0, 1.0;
  const auto two = nodal_polynomials(c);
  CHECK(two.coefficients(0, 0) == -1.0);
  CHECK(two.coefficients(0, 1) == 1.0);
  CHECK(two.at_own_node(0) == -1.0);
  CHECK(two.coefficients(1, 0) == 0.0);
  CHECK(two.coefficients(1, 1) == 1.0);
  CHECK(two.at_own_node(1) == 1.0);
}

TEST_CASE("cubic nodal polynomials agree with direct products at random points") {
  VectorXd c(4);
  c << 0.0, 1.0 / 3, 2.0 / 3, 1.0;
  const auto nodal = nodal_polynomials(c);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double x = u(rng);
    for (int j = 0; j < 4; ++j) {
      double horner = 0.0;
      for (int k = 3; k >= 0; --k) horner = horner * x + nodal.coefficients(j, k);
      CHECK(horner == doctest::Approx(product_oracle(c, j, x)).epsilon(1e-13));
    }
  }
}

TEST_CASE("nodal polynomial values and integrals match a product-and-quadrature oracle") {
  std::mt19937_64 rng(5);
  for (int s = 1; s <= 6; ++s) {
    const VectorXd c = random_distinct_nodes(rng, s);
    const auto nodal = nodal_polynomials(c);
    for (int j = 0; j < s; ++j) {
      auto phi = [&](double x) { return product_oracle(c, j, x); };
      CHECK(std::abs(nodal.at_own_node(j) - phi(c(j))) < 1e-12);
      for (int i = 0; i < s; ++i) {
        CHECK(std::abs(nodal.at_shifted_node(i, j) - phi(1 + c(i))) < 1e-12);
        CHECK(std::abs(nodal.integral_to_shifted(i, j) - testing::integrate(phi, 0.0, 1 + c(i))) < 1e-12);
        CHECK(std::abs(nodal.integral_to_node(i, j) - testing::integrate(phi, 0.0, c(i))) < 1e-12);
      }
    }
  }
}

TEST_CASE("duplicate abscissae are rejected") {
  VectorXd c(3);
  c << 0.0, 0.5, 0.5;
  CHECK_THROWS_AS(nodal_polynomials(c), DistinctNodesError);
  CHECK_THROWS_AS(dimsim_b_matrix(MatrixXd::Zero(3, 3), c, VectorXd::Ones(3) / 3), DistinctNodesError);
}

TEST_CASE("one-stage B matrices") {
  const VectorXd c = VectorXd::Zero(1), v = VectorXd::Ones(1);
  CHECK(dimsim_b_matrix(MatrixXd::Zero(1, 1), c, v)(0, 0) == doctest::Approx(1.0));
  CHECK(dimsim_b_matrix(MatrixXd::Ones(1, 1), c, v)(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("B recomputed from the order conditions reproduces the stored tables") {
  for (const auto* m : {&builtin_imex_dimsim4(), &builtin_imex_dimsim5()}) {
    CAPTURE(m->name);
    const MatrixXd B = dimsim_b_matrix(m->explicit_part.A, m->c(), m->v);
    const MatrixXd Bhat = dimsim_b_matrix(m->implicit_part.A, m->c(), m->v);
    CHECK((B - m->explicit_part.B).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((Bhat - m->implicit_part.B).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("starting weights: spot values and stored tables") {
  const auto& m4 = builtin_imex_dimsim4();
  const MatrixXd Q = starting_weight_matrix(m4.explicit_part.A, m4.c(), 4);
  CHECK(Q(1, 1) == doctest::Approx(0.074436267358921).epsilon(1e-14));
  CHECK(Q(1, 2) == doctest::Approx(0.055555555555556).epsilon(1e-12));
  CHECK(Q(1, 3) == doctest::Approx(0.006172839506173).epsilon(1e-12));
  const MatrixXd Qhat = starting_weight_matrix(m4.implicit_part.A, m4.c(), 4);
  CHECK(Qhat(0, 1) == doctest::Approx(-0.572816062482135).epsilon(1e-14));

  for (const auto* m : {&builtin_imex_dimsim4(), &builtin_imex_dimsim5()}) {
    CAPTURE(m->name);
    CHECK((starting_weight_matrix(m->explicit_part.A, m->c(), m->p()) - m->Q).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((starting_weight_matrix(m->implicit_part.A, m->c(), m->p()) - m->Qhat).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(m->Q.col(0).isOnes());
    CHECK(m->Qhat.col(0).isOnes());
  }
}

TEST_CASE("zero A gives scaled powers of c") {
  VectorXd c(3);
  c << 0.0, 0.4, 1.0;
  const MatrixXd Q = starting_weight_matrix(MatrixXd::Zero(3, 3), c, 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(Q(i, 1) == doctest::Approx(c(i)));
    CHECK(Q(i, 2) == doctest::Approx(c(i) * c(i) / 2));
    CHECK(Q(i, 3) == doctest::Approx(c(i) * c(i) * c(i) / 6));
  }
}

TEST_CASE("printed weights v sum to one") {
  // Direct addition of the printed digits.
  const double v4 = 0.281364340879037 - 1.282889560784121 + 2.266595749735792 - 0.265070529830707;
  const double v5 = -0.079385465132435 + 0.554317572910577 - 1.569589549144155 + 2.332074592443682 -
                    0.237417151077669;
  CHECK(std::abs(v4 - 1.0) < 2e-15);
  CHECK(std::abs(v5 - 1.0) < 2e-15);
  CHECK(std::abs(builtin_imex_dimsim4().v.sum() - 1.0) < 2e-15);
  CHECK(std::abs(builtin_imex_dimsim5().v.sum() - 1.0) < 2e-15);
}

TEST_CASE("built-in methods validate") {
  for (const auto* m : {&builtin_imex_dimsim4(), &builtin_imex_dimsim5(), &builtin_imex_euler()}) {
    const auto report = validate_method(*m);
    CAPTURE(m->name);
    for (const auto& c : report.checks) {
      CAPTURE(c.name);
      CHECK(c.passed);
      CHECK(c.residual >= 0.0);
      CHECK(std::isfinite(c.residual));
      CHECK(c.residual < 1e-8);
    }
    CHECK(report.passed());
  }
}

TEST_CASE("a v that does not sum to one is flagged with its residual") {
  VectorXd v(2);
  v << 0.5, 0.6;
  const auto report = validate_method(two_stage_pair(v));
  CHECK_FALSE(report.passed());
  REQUIRE(report.find("v_sum") != nullptr);
  CHECK(report.find("v_sum")->residual == doctest::Approx(0.1));
  CHECK_FALSE(report.find("v_sum")->passed);
  CHECK(report.find("V_row_sums")->residual == doctest::Approx(0.1));
}

TEST_CASE("tampered B is caught by the reproduction check") {
  ImexGlmMethod m = builtin_imex_dimsim4();
  m.explicit_part.B(2, 1) += 1e-6;
  const auto report = validate_method(m);
  CHECK_FALSE(report.find("B_explicit_reproduction")->passed);
  CHECK(report.find("B_explicit_reproduction")->residual == doctest::Approx(1e-6).epsilon(1e-3));
  CHECK(report.find("B_implicit_reproduction")->passed);
}

TEST_CASE("coefficient files round-trip bit-exactly") {
  for (const auto* m : {&builtin_imex_dimsim4(), &builtin_imex_dimsim5(), &builtin_imex_euler()}) {
    const auto path = testing::temp_path("roundtrip.json");
    write_method_file(*m, path);
    const ImexGlmMethod back = read_method_file(path);
    CHECK(back.name == m->name);
    CHECK(back.c() == m->c());
    CHECK(back.explicit_part.A == m->explicit_part.A);
    CHECK(back.implicit_part.A == m->implicit_part.A);
    CHECK(back.explicit_part.B == m->explicit_part.B);
    CHECK(back.implicit_part.B == m->implicit_part.B);
    CHECK(back.v == m->v);
    CHECK(back.Q == m->Q);
    CHECK(back.Qhat == m->Qhat);
  }
}

TEST_CASE("numbers are stored as 17-digit strings") {
  const auto j = method_to_json(builtin_imex_dimsim4());
  REQUIRE(j["A"][1][0].is_string());
  CHECK(io::parse_number(j["A"][1][0], "x") == builtin_imex_dimsim4().explicit_part.A(1, 0));
  CHECK(io::parse_number(nlohmann::json("1/3"), "x") == doctest::Approx(1.0 / 3));
  CHECK(io::parse_number(nlohmann::json(0.25), "x") == 0.25);
}

TEST_CASE("malformed files name the offending field") {
  auto j = method_to_json(builtin_imex_dimsim4());
  j["A"][1][2] = "abc";
  try {
    method_from_json(j);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.field() == "A[1][2]");
  }

  auto missing = method_to_json(builtin_imex_dimsim4());
  missing.erase("Qhat");
  try {
    method_from_json(missing);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.field() == "Qhat");
  }

  const auto path = testing::temp_path("broken.json");
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(read_method_file(path), ParseError);
}

TEST_CASE("wrong shapes raise shape errors") {
  auto j = method_to_json(builtin_imex_dimsim4());
  j["A"].erase(3);
  CHECK_THROWS_AS(method_from_json(j), ShapeError);

  auto k = method_to_json(builtin_imex_dimsim4());
  k["B"][0].push_back("0");
  CHECK_THROWS_AS(method_from_json(k), ShapeError);

  auto r = method_to_json(builtin_imex_dimsim4());
  r["r"] = 5;
  CHECK_THROWS_AS(method_from_json(r), ShapeError);
}

TEST_CASE("a file with perturbed v parses and is flagged by validation") {
  auto j = method_to_json(builtin_imex_dimsim4());
  j["v"][0] = io::format_number(builtin_imex_dimsim4().v(0) + 1e-9);
  const auto path = testing::temp_path("perturbed_v.json");
  io::write_json_file(j, path);
  const ImexGlmMethod m = read_method_file(path);
  const auto report = validate_method(m);
  CHECK_FALSE(report.find("v_sum")->passed);
  CHECK(report.find("v_sum")->residual == doctest::Approx(1e-9).epsilon(1e-3));
}

}  // TEST_SUITE
