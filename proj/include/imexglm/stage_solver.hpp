#pragma once

#include <map>
#include <memory>

#include "imexglm/glm_tableau.hpp"
#include "imexglm/problem.hpp"

namespace imexglm {

enum class JacobianRefresh {
  PerStage,        // evaluate and factor I - gamma J at every implicit stage
  PerStep,         // one factorization per (step, gamma)
  FrozenForLinear  // one factorization per gamma for the whole run when g is linear, else per stage
};

struct StageSolveConfig {
  double newton_tolerance = 1e-12;  // relative to max(1, |rhs|)
  int max_newton_iterations = 25;
  JacobianRefresh refresh = JacobianRefresh::FrozenForLinear;

  void check() const;
};

/// Solves the implicit stage equation Y - gamma g(t, Y) = rhs.
///
/// Linear stiff terms are solved directly with a factorization of I - gamma J,
/// cached by gamma according to the refresh policy. Nonlinear stiff terms use a
/// simplified Newton iteration whose matrix is built from J at the predictor.
class StageSolver {
 public:
  StageSolver(const SemiDiscreteProblem& problem, StageSolveConfig config = {});
  ~StageSolver();
  StageSolver(StageSolver&&) noexcept;
  StageSolver& operator=(StageSolver&&) = delete;

  VectorXd solve(int stage, const VectorXd& rhs, double t, double gamma, const VectorXd& predictor);
  VectorXd solve(int stage, const VectorXd& rhs, double t, double gamma) {
    return solve(stage, rhs, t, gamma, rhs);
  }

  /// Drops factorizations that must not outlive a step.
  void begin_step();

  const StageSolveConfig& config() const { return config_; }
  /// Number of matrix factorizations performed so far.
  long factorization_count() const { return factorizations_; }

 private:
  class Factorization;

  std::unique_ptr<Factorization> factor(double t, double gamma, const VectorXd& at) const;
  const Factorization& cached(double t, double gamma, const VectorXd& at);

  const SemiDiscreteProblem* problem_;
  StageSolveConfig config_;
  std::map<double, std::unique_ptr<Factorization>> cache_;
  std::unique_ptr<Factorization> scratch_;
  long factorizations_ = 0;
};

/// Solves stage `stage` (0-based) of the implicit part of `m` at stage time t + c_i h.
VectorXd solve_stage(int stage, const VectorXd& rhs, const ImexGlmMethod& m,
                     const SemiDiscreteProblem& problem, double t, double h,
                     const StageSolveConfig& config = {});

}  // namespace imexglm
