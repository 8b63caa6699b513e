#include <doctest.h>

#include "imexglm/errors.hpp"
#include "imexglm/method_io.hpp"
#include "imexglm/methods.hpp"
#include "test_support.hpp"

using namespace imexglm;

TEST_SUITE("methods") {

TEST_CASE("dimsim4 spot values") {
  const auto& m = builtin_imex_dimsim4();
  CHECK(m.name == "IMEX-DIMSIM4");
  CHECK(m.s() == 4);
  CHECK(m.r() == 4);
  CHECK(m.p() == 4);
  CHECK(m.q() == 4);
  CHECK(m.implicit_part.lambda() == 0.572816062482135);
  CHECK(m.explicit_part.A(2, 0) == 2.729801825357062);
  CHECK(m.c()(1) == 1.0 / 3.0);
  CHECK(m.explicit_part.lambda() == 0.0);
  for (int i = 0; i < 4; ++i) CHECK(m.implicit_part.A(i, i) == m.implicit_part.lambda());
  CHECK(m.U().isIdentity());
  CHECK(m.V().row(2) == m.v.transpose());
}

TEST_CASE("dimsim5 spot values") {
  const auto& m = builtin_imex_dimsim5();
  CHECK(m.s() == 5);
  CHECK(m.implicit_part.lambda() == 0.278053841136452);
  CHECK(m.v(0) == -0.079385465132435);
  CHECK(m.v(3) == 2.332074592443682);
  CHECK(m.c()(2) == 0.5);
  CHECK(m.explicit_part.A(4, 0) == 10.333193352608074);
}

TEST_CASE("built-ins are shared singletons with stable contents") {
  const auto& a = builtin_imex_dimsim4();
  const auto& b = builtin_method("dimsim4");
  CHECK(&a == &b);
  ImexGlmMethod copy = a;
  copy.explicit_part.A(1, 0) = 99.0;
  CHECK(builtin_imex_dimsim4().explicit_part.A(1, 0) == 0.258897065974412);
  CHECK(&builtin_method("dimsim5") == &builtin_imex_dimsim5());
  CHECK(&builtin_method("imex-euler") == &builtin_imex_euler());
  CHECK_THROWS_AS(builtin_method("dimsim6"), Error);
}

TEST_CASE("IMEX Euler as a one-stage method") {
  const auto& m = builtin_imex_euler();
  CHECK(m.s() == 1);
  CHECK(m.explicit_part.A(0, 0) == 0.0);
  CHECK(m.implicit_part.A(0, 0) == 1.0);
  CHECK(m.explicit_part.B(0, 0) == 1.0);
  CHECK(m.implicit_part.B(0, 0) == 1.0);
  CHECK(m.v(0) == 1.0);
  CHECK(m.Q(0, 0) == 1.0);
  CHECK(m.Q(0, 1) == 0.0);
  CHECK(m.Qhat(0, 1) == -1.0);
}

TEST_CASE("ARS(4,4,3) satisfies the third-order additive conditions") {
  const auto& m = builtin_ars443();
  const auto& E = m.explicit_part;
  const auto& I = m.implicit_part;
  CHECK(m.stages == 5);
  const VectorXd& c = E.c;
  CHECK((E.A.rowwise().sum() - c).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((I.A.rowwise().sum() - c).cwiseAbs().maxCoeff() < 1e-15);
  // Every b from {explicit, implicit} against every A from {explicit, implicit}.
  for (const auto* outer : {&E, &I}) {
    const VectorXd& b = outer->b;
    CHECK(b.sum() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b.dot(c) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(b.dot(c.cwiseProduct(c)) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    for (const auto* inner : {&E, &I}) CHECK(b.dot(inner->A * c) == doctest::Approx(1.0 / 6).epsilon(1e-15));
  }
  // Stiffly accurate implicit part: b equals the last row.
  CHECK((I.A.row(4).transpose() - I.b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("IMEX Euler in ARK form") {
  const ImexRkMethod m = imex_euler_as_ark();
  CHECK(m.stages == 2);
  CHECK(m.explicit_part.A(1, 0) == 1.0);
  CHECK(m.implicit_part.A(1, 1) == 1.0);
  CHECK(m.implicit_part.b(1) == 1.0);
  CHECK_NOTHROW(m.check());
}

TEST_CASE("ARK files round-trip") {
  const auto path = testing::temp_path("ars.json");
  write_ark_method(builtin_ars443(), path);
  const ImexRkMethod back = load_ark_method(path);
  CHECK(back.stages == 5);
  CHECK(back.explicit_part.A == builtin_ars443().explicit_part.A);
  CHECK(back.implicit_part.A == builtin_ars443().implicit_part.A);
  CHECK(back.explicit_part.b == builtin_ars443().explicit_part.b);
  CHECK(back.implicit_part.b == builtin_ars443().implicit_part.b);
  CHECK(back.implicit_part.c == back.explicit_part.c);
}

TEST_CASE("ARK files with inconsistent abscissae or missing parts are rejected") {
  auto j = ark_to_json(imex_euler_as_ark());
  j["c_implicit"] = nlohmann::json::array({"0", "0.5"});
  try {
    ark_from_json(j);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.field() == "c_implicit");
  }

  auto missing = ark_to_json(imex_euler_as_ark());
  missing.erase("A_implicit");
  try {
    ark_from_json(missing);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.field() == "A_implicit");
  }

  auto upper = ark_to_json(imex_euler_as_ark());
  upper["A_explicit"][0][1] = "1";
  CHECK_THROWS_AS(ark_from_json(upper), ShapeError);
}

}  // TEST_SUITE
