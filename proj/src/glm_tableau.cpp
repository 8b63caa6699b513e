#include "imexglm/glm_tableau.hpp"

#include "imexglm/errors.hpp"

namespace imexglm {

namespace {

void expect_shape(const MatrixXd& m, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols)
    throw ShapeError(std::string(what) + " is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                     std::to_string(cols));
}

}  // namespace

void GlmTableau::check_shapes() const {
  if (s < 1 || r < 1) throw ShapeError("tableau needs s >= 1 and r >= 1");
  expect_shape(A, s, s, "A");
  expect_shape(B, r, s, "B");
  expect_shape(U, s, r, "U");
  expect_shape(V, r, r, "V");
  if (c.size() != s) throw ShapeError("c has length " + std::to_string(c.size()));
}

void ImexGlmMethod::check_shapes() const {
  explicit_part.check_shapes();
  implicit_part.check_shapes();
  if (implicit_part.s != explicit_part.s || implicit_part.r != explicit_part.r)
    throw ShapeError("explicit and implicit parts differ in s or r");
  if (v.size() != r()) throw ShapeError("v has length " + std::to_string(v.size()));
  expect_shape(Q, r(), p() + 1, "Q");
  expect_shape(Qhat, r(), p() + 1, "Qhat");
}

ImexGlmMethod make_dimsim_pair(std::string name, const VectorXd& c, const MatrixXd& A,
                               const MatrixXd& B, const MatrixXd& Ahat, const MatrixXd& Bhat,
                               const VectorXd& v, const MatrixXd& Q, const MatrixXd& Qhat) {
  const int s = static_cast<int>(c.size());
  ImexGlmMethod m;
  m.name = std::move(name);
  m.v = v;
  m.Q = Q;
  m.Qhat = Qhat;

  GlmTableau base;
  base.s = base.r = base.p = base.q = s;
  base.c = c;
  base.U = MatrixXd::Identity(s, s);
  if (v.size() != s) throw ShapeError("v has length " + std::to_string(v.size()));
  base.V = VectorXd::Ones(s) * v.transpose();

  m.explicit_part = base;
  m.explicit_part.kind = TableauKind::Explicit;
  m.explicit_part.A = A;
  m.explicit_part.B = B;

  m.implicit_part = base;
  m.implicit_part.kind = TableauKind::Implicit;
  m.implicit_part.A = Ahat;
  m.implicit_part.B = Bhat;

  m.check_shapes();
  return m;
}

}  // namespace imexglm
