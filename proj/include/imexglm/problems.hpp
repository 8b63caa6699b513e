#pragma once

#include <complex>
#include <filesystem>
#include <functional>

#include "imexglm/problem.hpp"

namespace imexglm {

/// Interior nodes (i dx, j dx), i, j = 1..n-1, of the unit square with dx = 1/n.
/// Flattening is row-major with x fastest: k = (j-1)(n-1) + (i-1).
struct Grid2D {
  int n = 0;
  double dx = 0.0;

  explicit Grid2D(int n);
  int m() const { return n - 1; }
  Eigen::Index size() const { return Eigen::Index(n - 1) * (n - 1); }
  Eigen::Index index(int i, int j) const { return Eigen::Index(j - 1) * (n - 1) + (i - 1); }
  double coord(int i) const { return i * dx; }
  /// x and y coordinates of every interior node in flattened order.
  Eigen::ArrayXd x_nodes() const;
  Eigen::ArrayXd y_nodes() const;
};

using ScalarField = std::function<double(double t, double x, double y)>;

/// Five-point Laplacian on the interior nodes (homogeneous Dirichlet part).
SparseMatrixXd five_point_laplacian(const Grid2D& grid);

/// Boundary contribution of Dirichlet data u(t, .) to the five-point Laplacian, so
/// that L y + dirichlet_injection(...) approximates the Laplacian of the full field.
VectorXd dirichlet_injection(const Grid2D& grid, const ScalarField& u, double t);

struct PdeBenchmark {
  Grid2D grid;
  SemiDiscreteProblem problem;
  ScalarField exact;

  VectorXd exact_field(double t) const;
};

namespace allen_cahn {
constexpr double alpha = 0.01;
constexpr double beta = 3.0;
double exact(double t, double x, double y);
/// u_t - alpha Lap u - beta (u - u^3) at the exact solution.
double source(double t, double x, double y);
}  // namespace allen_cahn

namespace burgers {
constexpr double nu = 0.1;
double exact(double t, double x, double y);
}  // namespace burgers

/// u_t = alpha Lap u + beta (u - u^3) + s on [0, 0.5]; diffusion is the stiff part.
PdeBenchmark allen_cahn_problem(int n = 40);

/// u_t + (u^2/2)_x + (u^2/2)_y = nu Lap u on [0, 1]; diffusion is the stiff part.
PdeBenchmark burgers_problem(int n = 50);

/// y' = xi y + xihat y on [0, tF] with f = xi y and g = xihat y. Complex data is
/// carried as (Re, Im) with 2x2 rotation blocks; the real case has dimension 1.
SemiDiscreteProblem dahlquist_split_problem(std::complex<double> xi, std::complex<double> xihat,
                                            std::complex<double> y0 = 1.0, double tF = 1.0);

/// Plain Euclidean norm of u - u_ref.
double l2_error(const VectorXd& u, const VectorXd& u_ref);

/// |u - u_ref| per interior node.
VectorXd error_field(const VectorXd& u, const VectorXd& u_ref, const Grid2D& grid);

/// CSV with header i,j,x,y,value.
void write_field_csv(const std::filesystem::path& path, const VectorXd& field, const Grid2D& grid);

/// Classical RK4 on f + g with N_ref steps. Throws ReferenceError when the norm grows
/// beyond 1e12 times its initial size.
VectorXd reference_solution(const SemiDiscreteProblem& prob, long N_ref);

}  // namespace imexglm
