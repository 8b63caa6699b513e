#pragma once

#include <string>
#include <vector>

#include "imexglm/glm_tableau.hpp"

namespace imexglm {

struct ValidationCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct MethodValidationReport {
  std::string method;
  std::vector<ValidationCheck> checks;

  bool passed() const;
  /// Returns nullptr when no check has that name.
  const ValidationCheck* find(const std::string& name) const;
};

struct ValidationTolerances {
  double structural = 1e-12;
  double b_reproduction = 1e-8;
};

/// Runs every structural and order-condition check on `m`. Failures are report
/// entries; nothing here throws.
MethodValidationReport validate_method(const ImexGlmMethod& m, const ValidationTolerances& tol = {});

}  // namespace imexglm
