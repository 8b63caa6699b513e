#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "imexglm/glm_tableau.hpp"

namespace imexglm {

/// Fourth-order IMEX-DIMSIM, p = q = r = s = 4, c = [0, 1/3, 2/3, 1].
const ImexGlmMethod& builtin_imex_dimsim4();

/// Fifth-order IMEX-DIMSIM, p = q = r = s = 5, c = [0, 1/4, 1/2, 3/4, 1].
const ImexGlmMethod& builtin_imex_dimsim5();

/// Forward/backward Euler pair written as a one-stage IMEX-GLM.
const ImexGlmMethod& builtin_imex_euler();

/// Looks up "dimsim4", "dimsim5" or "imex-euler"; throws Error otherwise.
const ImexGlmMethod& builtin_method(const std::string& name);

struct RkTableau {
  MatrixXd A;
  VectorXd b;
  VectorXd c;
};

/// Additive (IMEX) Runge-Kutta pair. The explicit A is strictly lower
/// triangular, the implicit A lower triangular; both parts share c.
struct ImexRkMethod {
  std::string name;
  int stages = 0;
  RkTableau explicit_part;
  RkTableau implicit_part;

  /// Throws ShapeError on inconsistent sizes or structure and ParseError when
  /// the two abscissa vectors differ by more than 1e-12.
  void check() const;
};

/// Ascher-Ruuth-Spiteri ARS(4,4,3): third order, stiffly accurate L-stable
/// implicit part. Used as the default auxiliary scheme of the starting procedure.
const ImexRkMethod& builtin_ars443();

/// IMEX Euler as a two-stage additive RK pair.
ImexRkMethod imex_euler_as_ark();

// ARK coefficient files share the container format of GLM files:
// {name, sigma, c, A_explicit, b_explicit, A_implicit, b_implicit}, with an
// optional c_implicit that must match c.
nlohmann::json ark_to_json(const ImexRkMethod& m);
ImexRkMethod ark_from_json(const nlohmann::json& j);
ImexRkMethod load_ark_method(const std::filesystem::path& path);
void write_ark_method(const ImexRkMethod& m, const std::filesystem::path& path);

}  // namespace imexglm
