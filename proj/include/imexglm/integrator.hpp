#pragma once

#include <vector>

#include "imexglm/glm_tableau.hpp"
#include "imexglm/methods.hpp"
#include "imexglm/problem.hpp"
#include "imexglm/stage_solver.hpp"

namespace imexglm {

/// External vector y^[n] carried between steps. Column i of `blocks` is y_i^[n].
struct ExternalState {
  double t = 0.0;
  double h = 0.0;
  MatrixXd blocks;   // d x r
  VectorXd solution; // approximation of y(t)

  Eigen::Index dimension() const { return blocks.rows(); }
  int r() const { return static_cast<int>(blocks.cols()); }
};

struct StartingConfig {
  double tau_ratio = 0.5;  // tau = tau_ratio * h
  ImexRkMethod auxiliary = builtin_ars443();

  void check() const;
};

/// Inverse of T_jk = j^k / k! on the nodes j = 0..r-1: row k maps first
/// derivatives sampled at t0 + j tau to tau^k x^(k+1)(t0).
MatrixXd derivative_weights(int r);

/// diag(h/tau, (h/tau)^2, ..., (h/tau)^r).
MatrixXd rescaling_matrix(double h, double tau, int r);

/// Builds y^[0] from r-1 micro-steps of the auxiliary scheme with step tau.
ExternalState initialize_external(const ImexGlmMethod& m, const SemiDiscreteProblem& prob, double h,
                                  const StartingConfig& start = {}, const StageSolveConfig& cfg = {});

/// One step of the IMEX general linear method.
ExternalState glm_step(const ImexGlmMethod& m, const SemiDiscreteProblem& prob,
                       const ExternalState& state, StageSolver& solver);
ExternalState glm_step(const ImexGlmMethod& m, const SemiDiscreteProblem& prob,
                       const ExternalState& state, const StageSolveConfig& cfg = {});

/// One step of an additive Runge-Kutta pair.
VectorXd ark_step(const ImexRkMethod& m, const SemiDiscreteProblem& prob, const VectorXd& y, double t,
                  double h, StageSolver& solver);
VectorXd ark_step(const ImexRkMethod& m, const SemiDiscreteProblem& prob, const VectorXd& y, double t,
                  double h, const StageSolveConfig& cfg = {});

struct IntegrationResult {
  VectorXd y;                       // at tF
  std::vector<VectorXd> trajectory; // one entry per step when requested
  double start_seconds = 0.0;
  double step_seconds = 0.0;
  long factorizations = 0;
};

/// N fixed steps over [t0, tF]. Failures are rethrown as StepError with the
/// original exception nested.
IntegrationResult integrate(const ImexGlmMethod& m, const SemiDiscreteProblem& prob, long N,
                            const StartingConfig& start = {}, const StageSolveConfig& cfg = {},
                            bool keep_trajectory = false);

IntegrationResult integrate_ark(const ImexRkMethod& m, const SemiDiscreteProblem& prob, long N,
                                const StageSolveConfig& cfg = {}, bool keep_trajectory = false);

}  // namespace imexglm
