#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace imexglm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Abscissae passed to the nodal-polynomial machinery are not pairwise distinct.
class DistinctNodesError : public Error {
 public:
  using Error::Error;
};

/// A coefficient file could not be parsed. `field()` names the offending entry.
class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& what)
      : Error("parse error in field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Matrix or vector dimensions are inconsistent.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// I - zA (or I - wA - what Ahat, or a Newton iteration matrix) is singular.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Newton iteration for an implicit stage did not converge.
class StageSolveError : public Error {
 public:
  StageSolveError(int stage, double residual)
      : Error("stage " + std::to_string(stage) + " failed to converge, residual " +
              std::to_string(residual)),
        stage_(stage),
        residual_(residual) {}
  int stage() const noexcept { return stage_; }
  double residual() const noexcept { return residual_; }

 private:
  int stage_;
  double residual_;
};

/// A stage or solution value became non-finite.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// A failure while integrating, tagged with the step that failed (0-based; -1 for the starting procedure).
class StepError : public Error {
 public:
  StepError(long step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// Fine-step reference integration went unstable.
class ReferenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace imexglm
