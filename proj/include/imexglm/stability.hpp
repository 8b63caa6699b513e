#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "imexglm/glm_tableau.hpp"
#include "imexglm/validation.hpp"

namespace imexglm {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;

/// M(z) = V + z B (I - zA)^{-1} U. Throws SingularMatrixError when I - zA is singular.
MatrixXcd glm_stability_matrix(const GlmTableau& t, Complex z);

/// M(w, what) = V + (w B + what Bhat)(I - w A - what Ahat)^{-1} U.
MatrixXcd imex_stability_matrix(const ImexGlmMethod& m, Complex w, Complex what);

double spectral_radius(const MatrixXcd& M);

/// Coefficients of det(x I - M), ascending, leading coefficient 1 (Faddeev-LeVerrier).
Eigen::VectorXcd characteristic_polynomial(const MatrixXcd& M);

/// Pass/fail checks plus informational diagnostics that do not affect passed().
struct StabilityReport {
  std::vector<ValidationCheck> checks;
  std::vector<ValidationCheck> diagnostics;
  std::vector<Complex> samples;  // sampled z (IRKS only)
  std::vector<Complex> R;        // dominant eigenvalue of M(z) at each sample (IRKS only)

  bool passed() const;
  const ValidationCheck* find(const std::string& name) const;
};

/// Imaginary-axis and random left-half-plane bound rho <= 1 + 1e-12, and decay of
/// rho(M(-10^k)) for k = 2..8 down to below 1e-5.
StabilityReport check_L_stability(const GlmTableau& t, std::uint64_t seed = 7);

/// `count` points in the closed left half-plane with magnitudes 10^[log_min, log_max].
std::vector<Complex> left_half_plane_samples(int count, std::uint64_t seed, double log_min = -2.0,
                                             double log_max = 2.0);

/// The s-1 smallest eigenvalue magnitudes of M(z) must stay below 1e-6 at every sample.
StabilityReport check_irks(const GlmTableau& t, const std::vector<Complex>& samples);

struct StabilityQuery {
  std::vector<double> stiff_magnitudes{0.0, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
  int angle_count = 33;       // equally spaced in [-pi/2, pi/2]
  double alpha = std::numbers::pi / 2;  // sector half-angle
  double tol = 1e-3;          // bisection tolerance
  double y_top = 8.0;         // initial top ordinate
  int lines = 30;             // vertical lines in [x_b, 0]
  double x_left = -8.0;       // left end of the search for x_b

  void check() const;
  /// Stiff values what = -r e^{i theta}; for alpha < pi/2 only |theta| <= alpha is kept
  /// and the edge rays +-alpha are added.
  std::vector<Complex> stiff_grid() const;
};

struct GridMaximum {
  double rho = 0.0;   // over the non-singular grid points
  int singular = 0;   // grid points where I - wA - what Ahat is singular
};

GridMaximum max_rho_over_stiff_grid(const ImexGlmMethod& m, Complex w, const StabilityQuery& q);

/// Membership test for the constrained region S_alpha: rho(M(w, what)) < 1 over the
/// whole stiff grid. Keeps the last failing grid point first so exterior points
/// usually exit after one eigenvalue solve. Not thread-safe; use one per worker.
class ConstrainedRegion {
 public:
  ConstrainedRegion(const ImexGlmMethod& m, std::vector<Complex> grid);
  ConstrainedRegion(const ImexGlmMethod& m, const StabilityQuery& q)
      : ConstrainedRegion(m, q.stiff_grid()) {}

  bool contains(Complex w);
  long evaluations() const { return evaluations_; }

 private:
  const ImexGlmMethod* m_;
  std::vector<Complex> grid_;
  long evaluations_ = 0;
};

struct Intersection {
  double y = 0.0;
  bool outside = false;  // x + 0i itself is not in the region
};

/// Bisection on [0, y_top] for the upper boundary above x.
Intersection boundary_intersection(const std::function<bool(Complex)>& inside, double x,
                                   const StabilityQuery& q);
Intersection boundary_intersection(const ImexGlmMethod& m, double x, const StabilityQuery& q);

struct RegionBoundary {
  std::vector<double> x;
  std::vector<double> y;  // upper half; the lower half is -y
  double x_b = 0.0;
  bool trivial = false;
};

struct AreaResult {
  double x_b = 0.0;
  double area_upper = 0.0;
  double area_total = 0.0;  // 2 x area_upper; the convention used project-wide
  bool trivial = false;
  RegionBoundary boundary;
};

/// Leftmost real crossing, then trapezoidal area under the upper boundary.
AreaResult region_area(const std::function<bool(Complex)>& inside, const StabilityQuery& q);
AreaResult constrained_region_area(const ImexGlmMethod& m, const StabilityQuery& q);

enum class RegionKind { Constrained, Explicit, Implicit };

/// Boundary points for plotting. Constrained and Explicit (what = 0) use vertical
/// lines in the left half-plane. Implicit (w = 0) traces the bounded instability
/// region of the stiff component by bisection along rays from its pole 1/lambda.
RegionBoundary region_boundary_points(const ImexGlmMethod& m, const StabilityQuery& q, RegionKind kind);

struct OptimizerOptions {
  long budget = 2000;                 // area evaluations
  std::uint64_t seed = 1;
  double sample_range = 4.0;          // random starts drawn from [-range, range]
  double global_fraction = 0.5;       // share of the budget for random sampling
  int local_starts = 4;               // best samples polished by Nelder-Mead
  std::optional<MatrixXd> start;      // explicit A to seed the search
};

struct OptimizationResult {
  ImexGlmMethod method;
  double area = 0.0;                  // total area
  long evaluations = 0;
  bool failed = false;                // no candidate with a non-trivial region
};

/// Builds the explicit partner of `implicit_part` (B from the order conditions).
ImexGlmMethod explicit_partner(const GlmTableau& implicit_part, const VectorXd& c, const VectorXd& v,
                               const MatrixXd& A, const std::string& name = "optimized");

/// Maximizes the constrained-region area over the strictly lower entries of A.
OptimizationResult optimize_explicit_component(const GlmTableau& implicit_part, const VectorXd& c,
                                               const VectorXd& v, const StabilityQuery& q,
                                               const OptimizerOptions& options = {});

}  // namespace imexglm
