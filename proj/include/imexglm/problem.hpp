#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <functional>
#include <variant>

namespace imexglm {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using SparseMatrixXd = Eigen::SparseMatrix<double>;

/// Stiff Jacobian, dense or sparse.
using Jacobian = std::variant<MatrixXd, SparseMatrixXd>;

using RhsFunction = std::function<VectorXd(double t, const VectorXd& y)>;
using JacobianFunction = std::function<Jacobian(double t, const VectorXd& y)>;

/// y' = f(t, y) + g(t, y) on [t0, tF], f nonstiff and g stiff.
struct SemiDiscreteProblem {
  Eigen::Index dimension = 0;
  RhsFunction f;
  RhsFunction g;
  JacobianFunction stiff_jacobian;
  /// g(t, y) = J y + g(t, 0) with J constant.
  bool linear_stiff = false;
  double t0 = 0.0;
  double tF = 1.0;
  VectorXd y0;
};

}  // namespace imexglm
