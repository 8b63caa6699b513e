#pragma once

#include <Eigen/Dense>
#include <string>

namespace imexglm {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class TableauKind { Explicit, Implicit };

/// One component (explicit or implicit) of a general linear method.
///
///   Y   = h A F(Y) + U y[n-1]
///   y[n] = h B F(Y) + V y[n-1]
///
/// A is s x s, B is r x s, U is s x r, V is r x r, c has length s.
struct GlmTableau {
  int s = 0;
  int r = 0;
  int p = 0;
  int q = 0;
  MatrixXd A;
  MatrixXd B;
  MatrixXd U;
  MatrixXd V;
  VectorXd c;
  TableauKind kind = TableauKind::Explicit;

  /// Diagonal element of A (zero for explicit tableaus).
  double lambda() const { return A.rows() > 0 ? A(0, 0) : 0.0; }

  /// Checks matrix shapes against s and r; throws ShapeError.
  void check_shapes() const;
};

/// Implicit-explicit pair sharing c, U and V, with the starting weights used to
/// build the initial external vector.
struct ImexGlmMethod {
  std::string name;
  GlmTableau explicit_part;
  GlmTableau implicit_part;
  VectorXd v;    // V = 1 v^T
  MatrixXd Q;    // r x (p+1), column k multiplies h^k x^(k)
  MatrixXd Qhat; // r x (p+1), column k multiplies h^k z^(k)

  int s() const { return explicit_part.s; }
  int r() const { return explicit_part.r; }
  int p() const { return explicit_part.p; }
  int q() const { return explicit_part.q; }
  const VectorXd& c() const { return explicit_part.c; }
  const MatrixXd& U() const { return explicit_part.U; }
  const MatrixXd& V() const { return explicit_part.V; }

  void check_shapes() const;
};

/// Assembles an ImexGlmMethod of the p = q = r = s DIMSIM class: U = I, V = 1 v^T.
ImexGlmMethod make_dimsim_pair(std::string name, const VectorXd& c, const MatrixXd& A,
                               const MatrixXd& B, const MatrixXd& Ahat, const MatrixXd& Bhat,
                               const VectorXd& v, const MatrixXd& Q, const MatrixXd& Qhat);

}  // namespace imexglm
