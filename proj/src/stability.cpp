#include "imexglm/stability.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "imexglm/errors.hpp"
#include "imexglm/order_conditions.hpp"

namespace imexglm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// V + C L^{-1} U, where L = I - (w A + what Ahat) and C = w B + what Bhat.
MatrixXcd assemble(const MatrixXcd& L, const MatrixXcd& C, const MatrixXd& U, const MatrixXd& V,
                   double scale) {
  const Eigen::Index s = L.rows();
  const MatrixXcd Uc = U.cast<Complex>();
  bool lower = true;
  for (Eigen::Index i = 0; i < s && lower; ++i)
    for (Eigen::Index j = i + 1; j < s; ++j)
      if (L(i, j) != Complex(0.0)) {
        lower = false;
        break;
      }

  MatrixXcd X;
  if (lower) {
    const double tiny = 64 * std::numeric_limits<double>::epsilon() * scale;
    for (Eigen::Index i = 0; i < s; ++i)
      if (std::abs(L(i, i)) <= tiny) throw SingularMatrixError("I - zA is singular");
    X = L.triangularView<Eigen::Lower>().solve(Uc);
  } else {
    Eigen::PartialPivLU<MatrixXcd> lu(L);
    if (!(lu.rcond() > std::numeric_limits<double>::epsilon()))
      throw SingularMatrixError("I - zA is singular");
    X = lu.solve(Uc);
  }
  return V.cast<Complex>() + C * X;
}

ValidationCheck make_check(std::string name, double residual, double tolerance) {
  return {std::move(name), residual, tolerance, residual <= tolerance};
}

}  // namespace

MatrixXcd glm_stability_matrix(const GlmTableau& t, Complex z) {
  const Eigen::Index s = t.A.rows();
  const MatrixXcd L = MatrixXcd::Identity(s, s) - z * t.A.cast<Complex>();
  const double scale = 1.0 + std::abs(z) * t.A.diagonal().cwiseAbs().maxCoeff();
  return assemble(L, z * t.B.cast<Complex>(), t.U, t.V, scale);
}

MatrixXcd imex_stability_matrix(const ImexGlmMethod& m, Complex w, Complex what) {
  const auto& E = m.explicit_part;
  const auto& I = m.implicit_part;
  const Eigen::Index s = E.A.rows();
  const MatrixXcd L = MatrixXcd::Identity(s, s) - w * E.A.cast<Complex>() - what * I.A.cast<Complex>();
  const MatrixXcd C = w * E.B.cast<Complex>() + what * I.B.cast<Complex>();
  const double scale = 1.0 + std::abs(w) * E.A.diagonal().cwiseAbs().maxCoeff() +
                       std::abs(what) * I.A.diagonal().cwiseAbs().maxCoeff();
  return assemble(L, C, m.U(), m.V(), scale);
}

double spectral_radius(const MatrixXcd& M) {
  if (M.rows() != M.cols()) throw ShapeError("spectral_radius needs a square matrix");
  if (M.rows() == 0) return 0.0;
  if (M.rows() == 1) return std::abs(M(0, 0));
  Eigen::ComplexEigenSolver<MatrixXcd> es(M, false);
  if (es.info() != Eigen::Success) throw Error("eigenvalue iteration did not converge");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::VectorXcd characteristic_polynomial(const MatrixXcd& M) {
  const Eigen::Index n = M.rows();
  Eigen::VectorXcd c(n + 1);
  c(n) = 1.0;
  MatrixXcd Mk = MatrixXcd::Zero(n, n);
  const MatrixXcd I = MatrixXcd::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    Mk = M * Mk + c(n - k + 1) * I;
    c(n - k) = -(M * Mk).trace() / static_cast<double>(k);
  }
  return c;
}

bool StabilityReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidationCheck* StabilityReport::find(const std::string& name) const {
  for (const auto* list : {&checks, &diagnostics})
    for (const auto& c : *list)
      if (c.name == name) return &c;
  return nullptr;
}

std::vector<Complex> left_half_plane_samples(int count, std::uint64_t seed, double log_min,
                                             double log_max) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(log_min, log_max);
  std::uniform_real_distribution<double> angle(kPi / 2, 3 * kPi / 2);
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(std::polar(std::pow(10.0, mag(rng)), angle(rng)));
  return out;
}

StabilityReport check_L_stability(const GlmTableau& t, std::uint64_t seed) {
  auto rho = [&](Complex z) {
    try {
      return spectral_radius(glm_stability_matrix(t, z));
    } catch (const SingularMatrixError&) {
      return kInf;
    }
  };

  StabilityReport report;
  double axis = 0.0;
  for (int k = -2; k <= 4; ++k)
    for (double sign : {1.0, -1.0}) axis = std::max(axis, rho(Complex(0.0, sign * std::pow(10.0, k))) - 1.0);
  report.checks.push_back(make_check("imaginary_axis", std::max(axis, 0.0), 1e-12));

  double lhp = 0.0;
  for (Complex z : left_half_plane_samples(200, seed, -2.0, 4.0)) lhp = std::max(lhp, rho(z) - 1.0);
  report.checks.push_back(make_check("left_half_plane", std::max(lhp, 0.0), 1e-12));

  double increase = 0.0;
  double previous = rho(-1e2);
  for (int k = 3; k <= 8; ++k) {
    const double current = rho(-std::pow(10.0, k));
    increase = std::max(increase, current - previous);
    previous = current;
  }
  report.checks.push_back(make_check("large_z_monotone_decay", increase, 0.0));
  report.checks.push_back(make_check("rho_at_minus_1e8", previous, 1e-5));

  // tr M(z) is the stability function R(z) when the method has inherited RK stability.
  try {
    report.diagnostics.push_back(
        make_check("trace_at_minus_1e8", std::abs(glm_stability_matrix(t, -1e8).trace()), 1e-5));
  } catch (const SingularMatrixError&) {
    report.diagnostics.push_back(make_check("trace_at_minus_1e8", kInf, 1e-5));
  }
  return report;
}

StabilityReport check_irks(const GlmTableau& t, const std::vector<Complex>& samples) {
  StabilityReport report;
  const int r = static_cast<int>(t.V.rows());
  double small = 0.0, charpoly = 0.0, trace_gap = 0.0;
  for (Complex z : samples) {
    MatrixXcd M;
    try {
      M = glm_stability_matrix(t, z);
    } catch (const SingularMatrixError&) {
      small = charpoly = kInf;
      continue;
    }
    Eigen::ComplexEigenSolver<MatrixXcd> es(M, false);
    Eigen::VectorXcd ev = es.eigenvalues();
    std::vector<Complex> sorted(ev.data(), ev.data() + ev.size());
    std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
    if (r > 1) small = std::max(small, std::abs(sorted[r - 2]));
    const Complex R = sorted.back();
    report.samples.push_back(z);
    report.R.push_back(R);

    const Eigen::VectorXcd cp = characteristic_polynomial(M);
    for (int k = 0; k + 1 < r; ++k) charpoly = std::max(charpoly, std::abs(cp(k)));
    trace_gap = std::max(trace_gap, std::abs(M.trace() - R));
  }
  report.checks.push_back(make_check("small_eigenvalues", small, 1e-6));
  report.diagnostics.push_back(make_check("charpoly_lower_coefficients", charpoly, 1e-8));
  report.diagnostics.push_back(make_check("trace_minus_dominant_eigenvalue", trace_gap, 1e-6));
  return report;
}

void StabilityQuery::check() const {
  if (!(tol > 0.0)) throw Error("bisection tolerance must be positive");
  if (std::find(stiff_magnitudes.begin(), stiff_magnitudes.end(), 0.0) == stiff_magnitudes.end())
    throw Error("stiff magnitudes must contain 0");
  for (double r : stiff_magnitudes)
    if (!(r >= 0.0)) throw Error("stiff magnitudes must be non-negative");
  if (angle_count < 1) throw Error("at least one angle is required");
  if (!(alpha > 0.0 && alpha <= kPi / 2 + 1e-15)) throw Error("alpha must lie in (0, pi/2]");
  if (!(y_top > 0.0)) throw Error("y_top must be positive");
  if (lines < 2) throw Error("at least two vertical lines are required");
  if (!(x_left < 0.0)) throw Error("x_left must be negative");
}

std::vector<Complex> StabilityQuery::stiff_grid() const {
  check();
  std::vector<double> angles;
  for (int k = 0; k < angle_count; ++k) {
    const double theta = angle_count == 1 ? 0.0 : -kPi / 2 + kPi * k / (angle_count - 1);
    if (std::abs(theta) <= alpha + 1e-14) angles.push_back(theta);
  }
  if (alpha < kPi / 2 - 1e-14) {
    for (double edge : {-alpha, alpha}) {
      const bool present = std::any_of(angles.begin(), angles.end(),
                                       [&](double a) { return std::abs(a - edge) < 1e-12; });
      if (!present) angles.push_back(edge);
    }
    std::sort(angles.begin(), angles.end());
  }

  std::vector<Complex> grid;
  bool origin = false;
  for (double r : stiff_magnitudes) {
    if (r == 0.0) {
      if (!origin) grid.emplace_back(0.0, 0.0);
      origin = true;
      continue;
    }
    for (double theta : angles) grid.push_back(-std::polar(r, theta));
  }
  return grid;
}

GridMaximum max_rho_over_stiff_grid(const ImexGlmMethod& m, Complex w, const StabilityQuery& q) {
  GridMaximum out;
  for (Complex what : q.stiff_grid()) {
    try {
      out.rho = std::max(out.rho, spectral_radius(imex_stability_matrix(m, w, what)));
    } catch (const SingularMatrixError&) {
      ++out.singular;
    }
  }
  return out;
}

ConstrainedRegion::ConstrainedRegion(const ImexGlmMethod& m, std::vector<Complex> grid)
    : m_(&m), grid_(std::move(grid)) {}

bool ConstrainedRegion::contains(Complex w) {
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    ++evaluations_;
    bool stable = false;
    try {
      stable = spectral_radius(imex_stability_matrix(*m_, w, grid_[k])) < 1.0;
    } catch (const SingularMatrixError&) {
      stable = false;
    }
    if (!stable) {
      std::swap(grid_[0], grid_[k]);
      return false;
    }
  }
  return true;
}

Intersection boundary_intersection(const std::function<bool(Complex)>& inside, double x,
                                   const StabilityQuery& q) {
  if (!inside(Complex(x, 0.0))) return {0.0, true};
  double y_bot = 0.0, y_top = q.y_top;
  while (y_top - y_bot > q.tol) {
    const double y_mid = 0.5 * (y_bot + y_top);
    if (inside(Complex(x, y_mid)))
      y_bot = y_mid;
    else
      y_top = y_mid;
  }
  return {y_bot, false};
}

Intersection boundary_intersection(const ImexGlmMethod& m, double x, const StabilityQuery& q) {
  ConstrainedRegion region(m, q);
  return boundary_intersection([&](Complex w) { return region.contains(w); }, x, q);
}

AreaResult region_area(const std::function<bool(Complex)>& inside, const StabilityQuery& q) {
  q.check();
  AreaResult out;
  if (!inside(Complex(-q.tol, 0.0))) {
    out.trivial = out.boundary.trivial = true;
    return out;
  }
  double x_in = -q.tol, x_out = q.x_left;
  if (inside(Complex(x_out, 0.0))) {
    x_in = x_out;
  } else {
    while (x_in - x_out > q.tol) {
      const double mid = 0.5 * (x_in + x_out);
      if (inside(Complex(mid, 0.0)))
        x_in = mid;
      else
        x_out = mid;
    }
  }
  out.x_b = out.boundary.x_b = x_in;

  auto& xs = out.boundary.x;
  auto& ys = out.boundary.y;
  for (int k = 0; k < q.lines; ++k) {
    const double x = k + 1 == q.lines ? 0.0 : x_in * (1.0 - static_cast<double>(k) / (q.lines - 1));
    xs.push_back(x);
    ys.push_back(boundary_intersection(inside, x, q).y);
  }
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) out.area_upper += 0.5 * (xs[k + 1] - xs[k]) * (ys[k] + ys[k + 1]);
  out.area_total = 2.0 * out.area_upper;
  return out;
}

AreaResult constrained_region_area(const ImexGlmMethod& m, const StabilityQuery& q) {
  ConstrainedRegion region(m, q);
  return region_area([&](Complex w) { return region.contains(w); }, q);
}

RegionBoundary region_boundary_points(const ImexGlmMethod& m, const StabilityQuery& q, RegionKind kind) {
  if (kind == RegionKind::Constrained) return constrained_region_area(m, q).boundary;
  if (kind == RegionKind::Explicit) {
    ConstrainedRegion region(m, std::vector<Complex>{Complex(0.0)});
    return region_area([&](Complex w) { return region.contains(w); }, q).boundary;
  }

  const double lambda = m.implicit_part.lambda();
  if (!(lambda > 0.0)) throw Error("implicit region needs a positive diagonal");
  auto stable = [&](Complex what) {
    try {
      return spectral_radius(imex_stability_matrix(m, 0.0, what)) < 1.0;
    } catch (const SingularMatrixError&) {
      return false;
    }
  };
  const Complex pole(1.0 / lambda, 0.0);
  RegionBoundary out;
  out.x_b = kInf;
  const int rays = std::max(q.lines, 2);
  for (int k = 0; k < rays; ++k) {
    const Complex dir = std::polar(1.0, kPi * k / (rays - 1));
    double lo = 0.0, hi = 1.0;
    while (!stable(pole + hi * dir) && hi < 1e6) {
      lo = hi;
      hi *= 2.0;
    }
    while (hi - lo > q.tol) {
      const double mid = 0.5 * (lo + hi);
      if (stable(pole + mid * dir))
        hi = mid;
      else
        lo = mid;
    }
    const Complex z = pole + hi * dir;
    out.x.push_back(z.real());
    out.y.push_back(std::max(z.imag(), 0.0));
    out.x_b = std::min(out.x_b, z.real());
  }
  return out;
}

ImexGlmMethod explicit_partner(const GlmTableau& implicit_part, const VectorXd& c, const VectorXd& v,
                               const MatrixXd& A, const std::string& name) {
  const int p = static_cast<int>(c.size());
  const MatrixXd B = dimsim_b_matrix(A, c, v);
  const MatrixXd Q = starting_weight_matrix(A, c, p);
  const MatrixXd Qhat = starting_weight_matrix(implicit_part.A, c, p);
  return make_dimsim_pair(name, c, A, B, implicit_part.A, implicit_part.B, v, Q, Qhat);
}

namespace {

struct Candidate {
  VectorXd x;
  double score = -kInf;  // area when non-trivial, negative surrogate otherwise
  double area = 0.0;
};

class AreaObjective {
 public:
  AreaObjective(const GlmTableau& implicit_part, const VectorXd& c, const VectorXd& v,
                const StabilityQuery& q, long budget)
      : implicit_(implicit_part), c_(c), v_(v), q_(q), budget_(budget) {}

  int dimension() const { return static_cast<int>(c_.size() * (c_.size() - 1) / 2); }
  bool exhausted() const { return used_ >= budget_; }
  long used() const { return used_; }
  const Candidate& best() const { return best_; }

  MatrixXd to_matrix(const VectorXd& x) const {
    const Eigen::Index s = c_.size();
    MatrixXd A = MatrixXd::Zero(s, s);
    Eigen::Index k = 0;
    for (Eigen::Index i = 1; i < s; ++i)
      for (Eigen::Index j = 0; j < i; ++j) A(i, j) = x(k++);
    return A;
  }

  VectorXd to_vector(const MatrixXd& A) const {
    const Eigen::Index s = c_.size();
    VectorXd x(dimension());
    Eigen::Index k = 0;
    for (Eigen::Index i = 1; i < s; ++i)
      for (Eigen::Index j = 0; j < i; ++j) x(k++) = A(i, j);
    return x;
  }

  Candidate evaluate(const VectorXd& x) {
    ++used_;
    Candidate cand{x, -kInf, 0.0};
    try {
      const ImexGlmMethod m = explicit_partner(implicit_, c_, v_, to_matrix(x));
      const AreaResult res = constrained_region_area(m, q_);
      if (res.trivial) {
        // Pull trivial candidates toward stability just left of the origin.
        const GridMaximum g = max_rho_over_stiff_grid(m, Complex(-q_.tol, 0.0), q_);
        cand.score = g.singular > 0 || !std::isfinite(g.rho) ? -1e300 : -g.rho;
      } else {
        cand.area = res.area_total;
        cand.score = res.area_total;
      }
    } catch (const Error&) {
    }
    if (cand.score > best_.score) best_ = cand;
    return cand;
  }

 private:
  const GlmTableau& implicit_;
  const VectorXd& c_;
  const VectorXd& v_;
  const StabilityQuery& q_;
  long budget_;
  long used_ = 0;
  Candidate best_;
};

// Downhill simplex on -score until the shared budget or `evaluations` run out.
void nelder_mead(AreaObjective& obj, const Candidate& start, double step, long evaluations) {
  const int n = static_cast<int>(start.x.size());
  const long stop = obj.used() + evaluations;
  auto out_of_budget = [&] { return obj.exhausted() || obj.used() >= stop; };

  std::vector<Candidate> simplex{start};
  for (int k = 0; k < n && !out_of_budget(); ++k) {
    VectorXd x = start.x;
    x(k) += step;
    simplex.push_back(obj.evaluate(x));
  }
  if (static_cast<int>(simplex.size()) != n + 1) return;

  auto by_score = [](const Candidate& a, const Candidate& b) { return a.score > b.score; };
  while (!out_of_budget()) {
    std::sort(simplex.begin(), simplex.end(), by_score);
    double size = 0.0;
    for (int k = 1; k <= n; ++k) size = std::max(size, (simplex[k].x - simplex[0].x).cwiseAbs().maxCoeff());
    if (size < 1e-6) return;

    VectorXd centroid = VectorXd::Zero(n);
    for (int k = 0; k < n; ++k) centroid += simplex[k].x;
    centroid /= n;
    Candidate& worst = simplex[n];

    const Candidate reflected = obj.evaluate(centroid + (centroid - worst.x));
    if (reflected.score > simplex[0].score) {
      if (out_of_budget()) return;
      const Candidate expanded = obj.evaluate(centroid + 2.0 * (centroid - worst.x));
      worst = expanded.score > reflected.score ? expanded : reflected;
      continue;
    }
    if (reflected.score > simplex[n - 1].score) {
      worst = reflected;
      continue;
    }
    if (out_of_budget()) return;
    const bool outside = reflected.score > worst.score;
    const Candidate contracted =
        obj.evaluate(outside ? centroid + 0.5 * (reflected.x - centroid) : centroid + 0.5 * (worst.x - centroid));
    if (contracted.score > std::max(worst.score, outside ? reflected.score : -kInf)) {
      worst = contracted;
      continue;
    }
    for (int k = 1; k <= n && !out_of_budget(); ++k)
      simplex[k] = obj.evaluate(simplex[0].x + 0.5 * (simplex[k].x - simplex[0].x));
  }
}

}  // namespace

OptimizationResult optimize_explicit_component(const GlmTableau& implicit_part, const VectorXd& c,
                                               const VectorXd& v, const StabilityQuery& q,
                                               const OptimizerOptions& options) {
  q.check();
  if (options.budget < 1) throw Error("optimizer budget must be positive");
  AreaObjective obj(implicit_part, c, v, q, options.budget);
  const int n = obj.dimension();

  std::vector<Candidate> starts;
  if (options.start) starts.push_back(obj.evaluate(obj.to_vector(*options.start)));
  if (n == 0) {
    if (starts.empty()) obj.evaluate(VectorXd());
  } else {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> coord(-options.sample_range, options.sample_range);
    const long samples = static_cast<long>(options.global_fraction * static_cast<double>(options.budget));
    std::vector<Candidate> pool;
    while (obj.used() < samples && !obj.exhausted()) {
      VectorXd x(n);
      for (int k = 0; k < n; ++k) x(k) = coord(rng);
      pool.push_back(obj.evaluate(x));
    }
    std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
    for (std::size_t k = 0; k < pool.size() && static_cast<int>(starts.size()) < options.local_starts; ++k)
      starts.push_back(pool[k]);

    for (std::size_t k = 0; k < starts.size() && !obj.exhausted(); ++k) {
      const long remaining = options.budget - obj.used();
      const long share = remaining / static_cast<long>(starts.size() - k);
      nelder_mead(obj, starts[k], 0.1 * options.sample_range, share);
    }
  }

  const Candidate& best = obj.best();
  OptimizationResult out;
  out.evaluations = obj.used();
  out.area = best.area;
  out.failed = !(best.area > 0.0);
  const VectorXd x = best.x.size() == n ? best.x : VectorXd::Zero(n);
  out.method = explicit_partner(implicit_part, c, v, obj.to_matrix(x));
  return out;
}

}  // namespace imexglm
