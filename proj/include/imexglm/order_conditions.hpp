#pragma once

// DIMSIM order-condition machinery for the p = q = r = s class.
//
// phi_j(x) = prod_{k != j} (x - c_k) is expanded exactly in the monomial basis;
// all integrals are taken term-wise on the expanded coefficients, so no
// quadrature tolerance enters B.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "imexglm/errors.hpp"

namespace imexglm {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Evaluations and integrals of the nodal polynomials phi_j, indexed (i, j) where
/// j picks the polynomial and i the node.
template <typename Scalar>
struct NodalPolynomials {
  DenseMatrix<Scalar> coefficients;        // row j: ascending monomial coefficients of phi_j
  DenseVector<Scalar> at_own_node;         // phi_j(c_j)
  DenseMatrix<Scalar> at_shifted_node;     // phi_j(1 + c_i)
  DenseMatrix<Scalar> integral_to_shifted; // int_0^{1+c_i} phi_j
  DenseMatrix<Scalar> integral_to_node;    // int_0^{c_i} phi_j
};

namespace detail {

template <typename Scalar, typename Derived>
Scalar horner(const Eigen::MatrixBase<Derived>& coeffs, Scalar x) {
  Scalar acc(0);
  for (Eigen::Index k = coeffs.size() - 1; k >= 0; --k) acc = acc * x + coeffs(k);
  return acc;
}

// Antiderivative vanishing at 0, evaluated at x.
template <typename Scalar, typename Derived>
Scalar integral_from_zero(const Eigen::MatrixBase<Derived>& coeffs, Scalar x) {
  Scalar acc(0);
  for (Eigen::Index k = coeffs.size() - 1; k >= 0; --k)
    acc = acc * x + coeffs(k) / Scalar(k + 1);
  return acc * x;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace detail

template <typename Derived>
NodalPolynomials<typename Derived::Scalar> nodal_polynomials(const Eigen::MatrixBase<Derived>& c) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  const Eigen::Index s = c.size();
  const Scalar eps = Scalar(64) * std::numeric_limits<Scalar>::epsilon();
  for (Eigen::Index i = 0; i < s; ++i)
    for (Eigen::Index j = i + 1; j < s; ++j) {
      const Scalar scale = std::max({Scalar(1), abs(c(i)), abs(c(j))});
      if (abs(c(i) - c(j)) <= eps * scale)
        throw DistinctNodesError("abscissae " + std::to_string(i) + " and " + std::to_string(j) +
                                 " coincide");
    }

  NodalPolynomials<Scalar> out;
  out.coefficients = DenseMatrix<Scalar>::Zero(s, s);
  for (Eigen::Index j = 0; j < s; ++j) {
    DenseVector<Scalar> poly = DenseVector<Scalar>::Zero(s);
    poly(0) = Scalar(1);
    Eigen::Index degree = 0;
    for (Eigen::Index k = 0; k < s; ++k) {
      if (k == j) continue;
      // poly <- poly * (x - c_k)
      for (Eigen::Index m = degree + 1; m >= 1; --m) poly(m) = poly(m - 1) - c(k) * poly(m);
      poly(0) = -c(k) * poly(0);
      ++degree;
    }
    out.coefficients.row(j) = poly.transpose();
  }

  out.at_own_node.resize(s);
  out.at_shifted_node.resize(s, s);
  out.integral_to_shifted.resize(s, s);
  out.integral_to_node.resize(s, s);
  for (Eigen::Index j = 0; j < s; ++j) {
    const auto coeffs = out.coefficients.row(j);
    out.at_own_node(j) = detail::horner(coeffs, Scalar(c(j)));
    for (Eigen::Index i = 0; i < s; ++i) {
      const Scalar shifted = Scalar(1) + c(i);
      out.at_shifted_node(i, j) = detail::horner(coeffs, shifted);
      out.integral_to_shifted(i, j) = detail::integral_from_zero(coeffs, shifted);
      out.integral_to_node(i, j) = detail::integral_from_zero(coeffs, Scalar(c(i)));
    }
  }
  return out;
}

/// B = B0 - A B1 - V B2 + V A with V = 1 v^T. The result makes (A, B, I, V) a
/// DIMSIM of order and stage order s.
template <typename DerivedA, typename DerivedC, typename DerivedV>
DenseMatrix<typename DerivedA::Scalar> dimsim_b_matrix(const Eigen::MatrixBase<DerivedA>& A,
                                                       const Eigen::MatrixBase<DerivedC>& c,
                                                       const Eigen::MatrixBase<DerivedV>& v) {
  using Scalar = typename DerivedA::Scalar;
  const Eigen::Index s = c.size();
  if (A.rows() != s || A.cols() != s || v.size() != s)
    throw ShapeError("dimsim_b_matrix: A must be s x s and v of length s");

  const auto nodal = nodal_polynomials(c);
  const auto scale = nodal.at_own_node.cwiseInverse().asDiagonal();
  const DenseMatrix<Scalar> B0 = nodal.integral_to_shifted * scale;
  const DenseMatrix<Scalar> B1 = nodal.at_shifted_node * scale;
  const DenseMatrix<Scalar> B2 = nodal.integral_to_node * scale;
  const DenseMatrix<Scalar> V = DenseVector<Scalar>::Ones(s) * v.transpose();
  return B0 - A * B1 - V * B2 + V * A;
}

/// Starting weights: column 0 is 1, column k is c^k/k! - A c^{k-1}/(k-1)! for k = 1..p.
template <typename DerivedA, typename DerivedC>
DenseMatrix<typename DerivedA::Scalar> starting_weight_matrix(const Eigen::MatrixBase<DerivedA>& A,
                                                              const Eigen::MatrixBase<DerivedC>& c,
                                                              int p) {
  using Scalar = typename DerivedA::Scalar;
  const Eigen::Index s = c.size();
  if (A.rows() != s || A.cols() != s) throw ShapeError("starting_weight_matrix: A must be s x s");
  DenseMatrix<Scalar> Q(s, p + 1);
  Q.col(0).setOnes();
  for (int k = 1; k <= p; ++k) {
    const DenseVector<Scalar> prev = c.array().pow(Scalar(k - 1)).matrix();
    Q.col(k) = c.array().pow(Scalar(k)).matrix() / Scalar(detail::factorial(k)) -
               A * prev / Scalar(detail::factorial(k - 1));
  }
  return Q;
}

}  // namespace imexglm
