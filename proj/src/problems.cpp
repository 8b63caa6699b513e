#include "imexglm/problems.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "imexglm/errors.hpp"

namespace imexglm {

namespace {

constexpr double kPi = std::numbers::pi;

using Eigen::ArrayXd;

}  // namespace

Grid2D::Grid2D(int n_) : n(n_), dx(1.0 / n_) {
  if (n_ < 4) throw Error("grid needs n >= 4");
}

ArrayXd Grid2D::x_nodes() const {
  ArrayXd x(size());
  for (int j = 1; j < n; ++j)
    for (int i = 1; i < n; ++i) x(index(i, j)) = coord(i);
  return x;
}

ArrayXd Grid2D::y_nodes() const {
  ArrayXd y(size());
  for (int j = 1; j < n; ++j)
    for (int i = 1; i < n; ++i) y(index(i, j)) = coord(j);
  return y;
}

SparseMatrixXd five_point_laplacian(const Grid2D& grid) {
  const int n = grid.n;
  const double w = 1.0 / (grid.dx * grid.dx);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(5 * grid.size()));
  for (int j = 1; j < n; ++j)
    for (int i = 1; i < n; ++i) {
      const auto k = grid.index(i, j);
      entries.emplace_back(k, k, -4.0 * w);
      if (i > 1) entries.emplace_back(k, grid.index(i - 1, j), w);
      if (i < n - 1) entries.emplace_back(k, grid.index(i + 1, j), w);
      if (j > 1) entries.emplace_back(k, grid.index(i, j - 1), w);
      if (j < n - 1) entries.emplace_back(k, grid.index(i, j + 1), w);
    }
  SparseMatrixXd L(grid.size(), grid.size());
  L.setFromTriplets(entries.begin(), entries.end());
  return L;
}

VectorXd dirichlet_injection(const Grid2D& grid, const ScalarField& u, double t) {
  const int n = grid.n;
  const double w = 1.0 / (grid.dx * grid.dx);
  VectorXd b = VectorXd::Zero(grid.size());
  for (int k = 1; k < n; ++k) {
    const double s = grid.coord(k);
    b(grid.index(1, k)) += w * u(t, 0.0, s);
    b(grid.index(n - 1, k)) += w * u(t, 1.0, s);
    b(grid.index(k, 1)) += w * u(t, s, 0.0);
    b(grid.index(k, n - 1)) += w * u(t, s, 1.0);
  }
  return b;
}

VectorXd PdeBenchmark::exact_field(double t) const {
  VectorXd out(grid.size());
  for (int j = 1; j < grid.n; ++j)
    for (int i = 1; i < grid.n; ++i) out(grid.index(i, j)) = exact(t, grid.coord(i), grid.coord(j));
  return out;
}

namespace allen_cahn {

double exact(double t, double x, double y) {
  return 2.0 + std::sin(2 * kPi * (x - t)) * std::cos(3 * kPi * (y - t));
}

double source(double t, double x, double y) {
  const double S = std::sin(2 * kPi * (x - t)), C = std::cos(3 * kPi * (y - t));
  const double u = 2.0 + S * C;
  const double u_t = -2 * kPi * std::cos(2 * kPi * (x - t)) * C + 3 * kPi * S * std::sin(3 * kPi * (y - t));
  const double lap = -13 * kPi * kPi * S * C;
  return u_t - alpha * lap - beta * (u - u * u * u);
}

}  // namespace allen_cahn

namespace burgers {

double exact(double t, double x, double y) { return 1.0 / (1.0 + std::exp((x + y - t) / (2 * nu))); }

}  // namespace burgers

namespace {

// Fills g = coeff (L y + boundary(t)) and its constant Jacobian.
void set_diffusion(SemiDiscreteProblem& p, const Grid2D& grid, double coeff, ScalarField boundary) {
  const SparseMatrixXd J = coeff * five_point_laplacian(grid);
  p.g = [J, grid, coeff, boundary](double t, const VectorXd& y) -> VectorXd {
    return J * y + coeff * dirichlet_injection(grid, boundary, t);
  };
  p.stiff_jacobian = [J](double, const VectorXd&) -> Jacobian { return J; };
  p.linear_stiff = true;
}

}  // namespace

PdeBenchmark allen_cahn_problem(int n) {
  PdeBenchmark b{Grid2D(n), {}, allen_cahn::exact};
  auto& p = b.problem;
  p.dimension = b.grid.size();
  p.t0 = 0.0;
  p.tF = 0.5;

  const ArrayXd X = b.grid.x_nodes(), Y = b.grid.y_nodes();
  p.f = [X, Y](double t, const VectorXd& y) -> VectorXd {
    const ArrayXd u = y.array();
    const ArrayXd S = (2 * kPi * (X - t)).sin(), C = (3 * kPi * (Y - t)).cos();
    const ArrayXd ue = 2.0 + S * C;
    const ArrayXd ue_t = -2 * kPi * (2 * kPi * (X - t)).cos() * C + 3 * kPi * S * (3 * kPi * (Y - t)).sin();
    const ArrayXd source = ue_t + allen_cahn::alpha * 13 * kPi * kPi * S * C - allen_cahn::beta * (ue - ue.cube());
    return (allen_cahn::beta * (u - u.cube()) + source).matrix();
  };
  set_diffusion(p, b.grid, allen_cahn::alpha, allen_cahn::exact);
  p.y0 = b.exact_field(p.t0);
  return b;
}

PdeBenchmark burgers_problem(int n) {
  PdeBenchmark b{Grid2D(n), {}, burgers::exact};
  auto& p = b.problem;
  p.dimension = b.grid.size();
  p.t0 = 0.0;
  p.tF = 1.0;

  const Grid2D grid = b.grid;
  p.f = [grid](double t, const VectorXd& y) -> VectorXd {
    const int n = grid.n;
    // Squared field on the full (n+1) x (n+1) node set, boundary from the exact solution.
    Eigen::MatrixXd S(n + 1, n + 1);  // S(i, j)
    for (int k = 0; k <= n; ++k) {
      const double s = grid.coord(k);
      S(0, k) = burgers::exact(t, 0.0, s);
      S(n, k) = burgers::exact(t, 1.0, s);
      S(k, 0) = burgers::exact(t, s, 0.0);
      S(k, n) = burgers::exact(t, s, 1.0);
    }
    for (int j = 1; j < n; ++j)
      for (int i = 1; i < n; ++i) S(i, j) = y(grid.index(i, j));
    S = S.array().square().matrix();

    VectorXd out(grid.size());
    const double scale = -0.5 / (2 * grid.dx);
    for (int j = 1; j < n; ++j)
      for (int i = 1; i < n; ++i)
        out(grid.index(i, j)) = scale * (S(i + 1, j) - S(i - 1, j) + S(i, j + 1) - S(i, j - 1));
    return out;
  };
  set_diffusion(p, b.grid, burgers::nu, burgers::exact);
  p.y0 = b.exact_field(p.t0);
  return b;
}

SemiDiscreteProblem dahlquist_split_problem(std::complex<double> xi, std::complex<double> xihat,
                                            std::complex<double> y0, double tF) {
  SemiDiscreteProblem p;
  p.t0 = 0.0;
  p.tF = tF;
  p.linear_stiff = true;
  const bool real = xi.imag() == 0.0 && xihat.imag() == 0.0 && y0.imag() == 0.0;
  auto block = [real](std::complex<double> z) -> MatrixXd {
    if (real) return MatrixXd::Constant(1, 1, z.real());
    MatrixXd R(2, 2);
    R << z.real(), -z.imag(), z.imag(), z.real();
    return R;
  };
  const MatrixXd F = block(xi), G = block(xihat);
  p.dimension = F.rows();
  p.f = [F](double, const VectorXd& y) -> VectorXd { return F * y; };
  p.g = [G](double, const VectorXd& y) -> VectorXd { return G * y; };
  p.stiff_jacobian = [G](double, const VectorXd&) -> Jacobian { return G; };
  p.y0 = real ? VectorXd::Constant(1, y0.real()) : VectorXd(Eigen::Vector2d(y0.real(), y0.imag()));
  return p;
}

double l2_error(const VectorXd& u, const VectorXd& u_ref) {
  if (u.size() != u_ref.size()) throw ShapeError("l2_error: length mismatch");
  return (u - u_ref).norm();
}

VectorXd error_field(const VectorXd& u, const VectorXd& u_ref, const Grid2D& grid) {
  if (u.size() != grid.size() || u_ref.size() != grid.size())
    throw ShapeError("error_field: vectors do not match the grid");
  return (u - u_ref).cwiseAbs();
}

void write_field_csv(const std::filesystem::path& path, const VectorXd& field, const Grid2D& grid) {
  if (field.size() != grid.size()) throw ShapeError("field does not match the grid");
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(17);
  out << "i,j,x,y,value\n";
  for (int j = 1; j < grid.n; ++j)
    for (int i = 1; i < grid.n; ++i)
      out << i << ',' << j << ',' << grid.coord(i) << ',' << grid.coord(j) << ',' << field(grid.index(i, j))
          << '\n';
}

VectorXd reference_solution(const SemiDiscreteProblem& prob, long N_ref) {
  if (N_ref < 1) throw Error("reference needs N_ref >= 1");
  const double h = (prob.tF - prob.t0) / static_cast<double>(N_ref);
  auto rhs = [&](double t, const VectorXd& y) -> VectorXd { return prob.f(t, y) + prob.g(t, y); };
  const double limit = 1e12 * std::max(1.0, prob.y0.norm());
  VectorXd y = prob.y0;
  for (long n = 0; n < N_ref; ++n) {
    const double t = prob.t0 + n * h;
    const VectorXd k1 = rhs(t, y);
    const VectorXd k2 = rhs(t + h / 2, y + h / 2 * k1);
    const VectorXd k3 = rhs(t + h / 2, y + h / 2 * k2);
    const VectorXd k4 = rhs(t + h, y + h * k3);
    y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!(y.norm() <= limit))
      throw ReferenceError("RK4 reference unstable at step " + std::to_string(n) + " of " +
                           std::to_string(N_ref) + "; increase N_ref");
  }
  return y;
}

}  // namespace imexglm
