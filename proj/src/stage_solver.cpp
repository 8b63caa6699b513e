#include "imexglm/stage_solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <limits>
#include <optional>

#include "imexglm/errors.hpp"

namespace imexglm {

class StageSolver::Factorization {
 public:
  explicit Factorization(const MatrixXd& iteration_matrix) : dense_(iteration_matrix) {
    if (!(dense_->rcond() > std::numeric_limits<double>::epsilon()))
      throw SingularMatrixError("stage iteration matrix is singular");
  }

  explicit Factorization(const SparseMatrixXd& iteration_matrix)
      : sparse_(std::make_unique<SparseLU>()) {
    sparse_->analyzePattern(iteration_matrix);
    sparse_->factorize(iteration_matrix);
    if (sparse_->info() != Eigen::Success)
      throw SingularMatrixError("sparse LU of the stage iteration matrix failed: " +
                                sparse_->lastErrorMessage());
  }

  VectorXd solve(const VectorXd& b) const {
    if (dense_) return dense_->solve(b);
    return sparse_->solve(b);
  }

 private:
  using SparseLU = Eigen::SparseLU<SparseMatrixXd, Eigen::COLAMDOrdering<int>>;
  std::optional<Eigen::PartialPivLU<MatrixXd>> dense_;
  std::unique_ptr<SparseLU> sparse_;
};

void StageSolveConfig::check() const {
  if (!(newton_tolerance > 0.0)) throw Error("Newton tolerance must be positive");
  if (max_newton_iterations < 1) throw Error("at least one Newton iteration is required");
}

StageSolver::StageSolver(const SemiDiscreteProblem& problem, StageSolveConfig config)
    : problem_(&problem), config_(config) {
  config_.check();
}

StageSolver::~StageSolver() = default;
StageSolver::StageSolver(StageSolver&&) noexcept = default;

void StageSolver::begin_step() {
  const bool keep = config_.refresh == JacobianRefresh::FrozenForLinear && problem_->linear_stiff;
  if (!keep) cache_.clear();
}

std::unique_ptr<StageSolver::Factorization> StageSolver::factor(double t, double gamma,
                                                                const VectorXd& at) const {
  const Jacobian jac = problem_->stiff_jacobian(t, at);
  const Eigen::Index d = problem_->dimension;
  return std::visit(
      [&](const auto& J) -> std::unique_ptr<Factorization> {
        using T = std::decay_t<decltype(J)>;
        if (J.rows() != d || J.cols() != d) throw ShapeError("stiff Jacobian has the wrong shape");
        if constexpr (std::is_same_v<T, MatrixXd>) {
          const MatrixXd M = MatrixXd::Identity(d, d) - gamma * J;
          return std::make_unique<Factorization>(M);
        } else {
          SparseMatrixXd I(d, d);
          I.setIdentity();
          const SparseMatrixXd M = I - gamma * J;
          return std::make_unique<Factorization>(M);
        }
      },
      jac);
}

const StageSolver::Factorization& StageSolver::cached(double t, double gamma, const VectorXd& at) {
  const bool per_stage = config_.refresh == JacobianRefresh::PerStage ||
                         (config_.refresh == JacobianRefresh::FrozenForLinear && !problem_->linear_stiff);
  ++factorizations_;
  if (per_stage) {
    scratch_ = factor(t, gamma, at);
    return *scratch_;
  }
  auto it = cache_.find(gamma);
  if (it != cache_.end()) {
    --factorizations_;
    return *it->second;
  }
  return *cache_.emplace(gamma, factor(t, gamma, at)).first->second;
}

VectorXd StageSolver::solve(int stage, const VectorXd& rhs, double t, double gamma,
                            const VectorXd& predictor) {
  if (gamma == 0.0) return rhs;
  if (gamma < 0.0) throw Error("negative implicit diagonal coefficient");
  const auto& g = problem_->g;

  if (problem_->linear_stiff) {
    const VectorXd offset = g(t, VectorXd::Zero(rhs.size()));
    VectorXd Y = cached(t, gamma, predictor).solve(rhs + gamma * offset);
    if (!Y.allFinite()) throw DivergenceError("non-finite value in stage " + std::to_string(stage));
    return Y;
  }

  const Factorization& newton = cached(t, gamma, predictor);
  const double scale = std::max(1.0, rhs.norm());
  VectorXd Y = predictor;
  double residual_norm = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= config_.max_newton_iterations; ++it) {
    const VectorXd residual = Y - gamma * g(t, Y) - rhs;
    residual_norm = residual.norm();
    if (!std::isfinite(residual_norm))
      throw DivergenceError("non-finite residual in stage " + std::to_string(stage));
    if (residual_norm <= config_.newton_tolerance * scale) return Y;
    if (it == config_.max_newton_iterations) break;
    Y -= newton.solve(residual);
  }
  throw StageSolveError(stage, residual_norm);
}

VectorXd solve_stage(int stage, const VectorXd& rhs, const ImexGlmMethod& m,
                     const SemiDiscreteProblem& problem, double t, double h,
                     const StageSolveConfig& config) {
  StageSolver solver(problem, config);
  const double gamma = h * m.implicit_part.A(stage, stage);
  return solver.solve(stage, rhs, t + m.c()(stage) * h, gamma);
}

}  // namespace imexglm
