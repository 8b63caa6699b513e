#include "imexglm/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "imexglm/errors.hpp"
#include "imexglm/order_conditions.hpp"

namespace imexglm {

namespace {

constexpr double kUnavailable = std::numeric_limits<double>::max();

double max_abs(const MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double strict_upper_residual(const MatrixXd& A) {
  double res = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = i + 1; j < A.cols(); ++j) res = std::max(res, std::abs(A(i, j)));
  return res;
}

// Explicit: strictly lower triangular. Implicit: lower triangular with constant
// positive diagonal.
double triangularity_residual(const GlmTableau& t) {
  double res = strict_upper_residual(t.A);
  if (t.kind == TableauKind::Explicit) {
    res = std::max(res, t.A.diagonal().cwiseAbs().maxCoeff());
  } else {
    const double lambda = t.A(0, 0);
    res = std::max(res, (t.A.diagonal().array() - lambda).abs().maxCoeff());
    if (!(lambda > 0.0)) res = std::max(res, std::abs(lambda) + 1.0);
  }
  return res;
}

// c_1 = 0, c_s = 1, strictly increasing. A one-stage method only needs c_1 = 0.
double abscissa_residual(const VectorXd& c) {
  double res = std::abs(c(0));
  if (c.size() > 1) res += std::abs(c(c.size() - 1) - 1.0);
  for (Eigen::Index i = 1; i < c.size(); ++i)
    if (c(i) <= c(i - 1)) res = std::max(res, c(i - 1) - c(i) + 1.0);
  return res;
}

template <typename Fn>
double guarded(Fn&& fn) {
  try {
    const double r = fn();
    return std::isfinite(r) ? r : kUnavailable;
  } catch (const Error&) {
    return kUnavailable;
  }
}

}  // namespace

bool MethodValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck* MethodValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

MethodValidationReport validate_method(const ImexGlmMethod& m, const ValidationTolerances& tol) {
  MethodValidationReport report;
  report.method = m.name;
  auto add = [&](std::string name, double residual, double tolerance) {
    report.checks.push_back({std::move(name), residual, tolerance, residual <= tolerance});
  };

  try {
    m.check_shapes();
  } catch (const ShapeError&) {
    add("shapes", kUnavailable, 0.0);
    return report;
  }

  const auto& ex = m.explicit_part;
  const auto& im = m.implicit_part;
  const int s = m.s();
  const VectorXd ones = VectorXd::Ones(m.r());

  add("explicit_triangularity", triangularity_residual(ex), tol.structural);
  add("implicit_triangularity", triangularity_residual(im), tol.structural);
  add("shared_abscissae", max_abs(ex.c - im.c), tol.structural);
  add("shared_U", max_abs(ex.U - im.U), tol.structural);
  add("shared_V", max_abs(ex.V - im.V), tol.structural);
  add("abscissa_structure", abscissa_residual(ex.c), tol.structural);
  add("U_identity", ex.U.rows() == ex.U.cols() ? max_abs(ex.U - MatrixXd::Identity(s, s)) : kUnavailable,
      tol.structural);
  add("V_row_sums", (ex.V.rowwise().sum() - ones).cwiseAbs().maxCoeff(), tol.structural);
  add("V_rank_one", max_abs(ex.V - ones * m.v.transpose()), tol.structural);
  add("v_sum", std::abs(m.v.sum() - 1.0), tol.structural);

  add("B_explicit_reproduction",
      guarded([&] { return max_abs(dimsim_b_matrix(ex.A, ex.c, m.v) - ex.B); }), tol.b_reproduction);
  add("B_implicit_reproduction",
      guarded([&] { return max_abs(dimsim_b_matrix(im.A, im.c, m.v) - im.B); }), tol.b_reproduction);
  add("Q_reproduction", guarded([&] { return max_abs(starting_weight_matrix(ex.A, ex.c, m.p()) - m.Q); }),
      tol.structural);
  add("Qhat_reproduction",
      guarded([&] { return max_abs(starting_weight_matrix(im.A, im.c, m.p()) - m.Qhat); }),
      tol.structural);
  return report;
}

}  // namespace imexglm
