#include "imexglm/integrator.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <iostream>

#include "imexglm/errors.hpp"

namespace imexglm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require_finite(const VectorXd& y, const char* what, int index) {
  if (!y.allFinite()) throw DivergenceError(std::string("non-finite ") + what + " " + std::to_string(index));
}

}  // namespace

void StartingConfig::check() const {
  if (!(tau_ratio > 0.0 && tau_ratio <= 1.0)) throw Error("tau ratio must lie in (0, 1]");
  auxiliary.check();
}

MatrixXd derivative_weights(int r) {
  if (r < 1) throw ShapeError("derivative_weights needs r >= 1");
  if (r > 12) std::clog << "warning: derivative_weights(" << r << ") is badly conditioned\n";
  MatrixXd T(r, r);
  for (int j = 0; j < r; ++j) {
    double term = 1.0;
    for (int k = 0; k < r; ++k) {
      T(j, k) = term;
      term *= static_cast<double>(j) / (k + 1);
    }
  }
  return T.fullPivLu().inverse();
}

MatrixXd rescaling_matrix(double h, double tau, int r) {
  if (!(tau > 0.0)) throw Error("rescaling_matrix needs tau > 0");
  VectorXd d(r);
  double ratio = 1.0;
  for (int k = 0; k < r; ++k) d(k) = (ratio *= h / tau);
  return d.asDiagonal();
}

VectorXd ark_step(const ImexRkMethod& m, const SemiDiscreteProblem& prob, const VectorXd& y, double t,
                  double h, StageSolver& solver) {
  const int S = m.stages;
  const auto& E = m.explicit_part;
  const auto& I = m.implicit_part;
  MatrixXd F(y.size(), S), G(y.size(), S);
  VectorXd Y = y;
  solver.begin_step();
  for (int i = 0; i < S; ++i) {
    VectorXd rhs = y;
    for (int j = 0; j < i; ++j) rhs += h * (E.A(i, j) * F.col(j) + I.A(i, j) * G.col(j));
    const double ti = t + E.c(i) * h;
    Y = solver.solve(i, rhs, ti, h * I.A(i, i), Y);
    require_finite(Y, "ARK stage", i);
    F.col(i) = prob.f(ti, Y);
    G.col(i) = prob.g(ti, Y);
  }
  return y + h * (F * E.b + G * I.b);
}

VectorXd ark_step(const ImexRkMethod& m, const SemiDiscreteProblem& prob, const VectorXd& y, double t,
                  double h, const StageSolveConfig& cfg) {
  StageSolver solver(prob, cfg);
  return ark_step(m, prob, y, t, h, solver);
}

ExternalState initialize_external(const ImexGlmMethod& m, const SemiDiscreteProblem& prob, double h,
                                  const StartingConfig& start, const StageSolveConfig& cfg) {
  start.check();
  const int r = m.r();
  const double tau = start.tau_ratio * h;
  const double t0 = prob.t0;
  const VectorXd& y0 = prob.y0;
  if (y0.size() != prob.dimension) throw ShapeError("y0 does not match the problem dimension");

  MatrixXd F(y0.size(), r), G(y0.size(), r);
  VectorXd y = y0;
  StageSolver solver(prob, cfg);
  for (int j = 0; j < r; ++j) {
    if (j > 0) y = ark_step(start.auxiliary, prob, y, t0 + (j - 1) * tau, tau, solver);
    require_finite(y, "starting value", j);
    F.col(j) = prob.f(t0 + j * tau, y);
    G.col(j) = prob.g(t0 + j * tau, y);
  }

  const MatrixXd RD = rescaling_matrix(h, tau, r) * derivative_weights(r);
  const MatrixXd W = tau * m.Q.middleCols(1, r) * RD;
  const MatrixXd What = tau * m.Qhat.middleCols(1, r) * RD;

  ExternalState state;
  state.t = t0;
  state.h = h;
  state.blocks = y0 * Eigen::RowVectorXd::Ones(r) + F * W.transpose() + G * What.transpose();
  state.solution = y0;
  return state;
}

ExternalState glm_step(const ImexGlmMethod& m, const SemiDiscreteProblem& prob,
                       const ExternalState& state, StageSolver& solver) {
  const int s = m.s();
  if (state.r() != m.r()) throw ShapeError("external state has the wrong number of blocks");
  const auto& A = m.explicit_part.A;
  const auto& Ahat = m.implicit_part.A;
  const VectorXd& c = m.c();
  const double t = state.t, h = state.h;

  MatrixXd F(state.dimension(), s), G(state.dimension(), s);
  VectorXd Y = state.blocks.col(0);
  solver.begin_step();
  for (int i = 0; i < s; ++i) {
    VectorXd rhs = state.blocks * m.U().row(i).transpose();
    for (int j = 0; j < i; ++j) rhs += h * (A(i, j) * F.col(j) + Ahat(i, j) * G.col(j));
    const double ti = t + c(i) * h;
    Y = solver.solve(i, rhs, ti, h * Ahat(i, i), Y);
    require_finite(Y, "stage", i);
    F.col(i) = prob.f(ti, Y);
    G.col(i) = prob.g(ti, Y);
  }

  ExternalState next;
  next.t = t + h;
  next.h = h;
  next.blocks = state.blocks * m.V().transpose() +
                h * (F * m.explicit_part.B.transpose() + G * m.implicit_part.B.transpose());
  if (!next.blocks.allFinite()) throw DivergenceError("non-finite external vector");

  if (c(s - 1) == 1.0) {
    next.solution = Y;
  } else if (c(0) == 0.0) {
    // Stage 1 of the following step sits at t + h.
    const VectorXd rhs = next.blocks * m.U().row(0).transpose();
    next.solution = solver.solve(0, rhs, next.t, h * Ahat(0, 0), Y);
  } else {
    throw ShapeError("solution readout needs c_s = 1 or c_1 = 0");
  }
  return next;
}

ExternalState glm_step(const ImexGlmMethod& m, const SemiDiscreteProblem& prob,
                       const ExternalState& state, const StageSolveConfig& cfg) {
  StageSolver solver(prob, cfg);
  return glm_step(m, prob, state, solver);
}

IntegrationResult integrate(const ImexGlmMethod& m, const SemiDiscreteProblem& prob, long N,
                            const StartingConfig& start, const StageSolveConfig& cfg,
                            bool keep_trajectory) {
  if (N < 1) throw Error("integrate needs N >= 1");
  const double h = (prob.tF - prob.t0) / static_cast<double>(N);
  IntegrationResult out;

  auto clock = Clock::now();
  ExternalState state;
  try {
    state = initialize_external(m, prob, h, start, cfg);
  } catch (const std::exception& e) {
    std::throw_with_nested(StepError(-1, e.what()));
  }
  out.start_seconds = seconds_since(clock);

  StageSolver solver(prob, cfg);
  if (keep_trajectory) out.trajectory.reserve(static_cast<std::size_t>(N));
  clock = Clock::now();
  for (long n = 0; n < N; ++n) {
    try {
      state = glm_step(m, prob, state, solver);
    } catch (const std::exception& e) {
      std::throw_with_nested(StepError(n, e.what()));
    }
    if (keep_trajectory) out.trajectory.push_back(state.solution);
  }
  out.step_seconds = seconds_since(clock);
  out.factorizations = solver.factorization_count();
  out.y = std::move(state.solution);
  return out;
}

IntegrationResult integrate_ark(const ImexRkMethod& m, const SemiDiscreteProblem& prob, long N,
                                const StageSolveConfig& cfg, bool keep_trajectory) {
  if (N < 1) throw Error("integrate_ark needs N >= 1");
  m.check();
  const double h = (prob.tF - prob.t0) / static_cast<double>(N);
  IntegrationResult out;
  StageSolver solver(prob, cfg);
  VectorXd y = prob.y0;
  const auto clock = Clock::now();
  for (long n = 0; n < N; ++n) {
    try {
      y = ark_step(m, prob, y, prob.t0 + n * h, h, solver);
    } catch (const std::exception& e) {
      std::throw_with_nested(StepError(n, e.what()));
    }
    if (keep_trajectory) out.trajectory.push_back(y);
  }
  out.step_seconds = seconds_since(clock);
  out.factorizations = solver.factorization_count();
  out.y = std::move(y);
  return out;
}

}  // namespace imexglm
