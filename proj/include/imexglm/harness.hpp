#pragma once

#include <filesystem>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "imexglm/integrator.hpp"
#include "imexglm/problems.hpp"
#include "imexglm/stability.hpp"

namespace imexglm {

/// A built-in GLM, a GLM coefficient file or an ARK coefficient file.
using AnyMethod = std::variant<ImexGlmMethod, ImexRkMethod>;

/// "dimsim4", "dimsim5", "imex-euler", or a JSON path (ARK files are recognized by
/// their A_explicit field).
AnyMethod load_any_method(const std::string& selector);
std::string method_name(const AnyMethod& m);

/// "ars443", "imex-euler", or an ARK coefficient file.
ImexRkMethod load_starter(const std::string& selector);

struct ProblemSpec {
  std::string name = "allen-cahn";  // allen-cahn | burgers | dahlquist
  int n = 0;                        // 0: 40 for Allen-Cahn, 50 for Burgers
  long reference_steps = 0;         // 0: 5000 for Allen-Cahn, 20000 for Burgers
  double xi = -1.0;                 // Dahlquist nonstiff coefficient
  double xihat = -2.0;              // Dahlquist stiff coefficient

  int resolved_n() const;
  long resolved_reference_steps() const;
  std::string key() const;
};

struct BenchmarkProblem {
  SemiDiscreteProblem problem;
  std::optional<Grid2D> grid;
  std::optional<VectorXd> exact_final;  // known closed form at tF (Dahlquist)
};

BenchmarkProblem make_problem(const ProblemSpec& spec);

struct Reference {
  VectorXd y;
  double self_check = std::numeric_limits<double>::quiet_NaN();  // |ref(N) - ref(2N)|
};

/// Computes each (problem, n, N_ref) reference once.
class ReferenceCache {
 public:
  const Reference& get(const ProblemSpec& spec, const BenchmarkProblem& problem, bool self_check = false);

 private:
  std::map<std::string, Reference> cache_;
};

struct StudySpec {
  ProblemSpec problem;
  std::string method = "dimsim4";
  std::vector<long> steps{25, 50, 100, 200};
  StartingConfig start;
  StageSolveConfig solver;
  int repeats = 3;

  void check() const;
};

IntegrationResult run_once(const AnyMethod& m, const SemiDiscreteProblem& prob, long N,
                           const StartingConfig& start, const StageSolveConfig& solver);

struct ConvergenceRow {
  long N = 0;
  double h = 0.0;
  double error = std::numeric_limits<double>::quiet_NaN();
  double pairwise_order = std::numeric_limits<double>::quiet_NaN();
  std::string failure;  // empty on success
};

struct ConvergenceTable {
  std::string method;
  std::string problem;
  std::vector<ConvergenceRow> rows;
  double slope = std::numeric_limits<double>::quiet_NaN();  // least squares over finite rows
  double reference_self_check = std::numeric_limits<double>::quiet_NaN();
};

/// Negated least-squares slope of log(error) against log(N) over finite rows.
double least_squares_order(const std::vector<ConvergenceRow>& rows);

ConvergenceTable run_convergence(const StudySpec& spec, ReferenceCache& cache);

struct WorkPrecisionRow {
  long N = 0;
  double h = 0.0;
  double seconds = std::numeric_limits<double>::quiet_NaN();        // minimum over repeats
  double max_seconds = std::numeric_limits<double>::quiet_NaN();    // maximum over repeats
  double start_seconds = std::numeric_limits<double>::quiet_NaN();  // starting procedure, minimum
  double error = std::numeric_limits<double>::quiet_NaN();
  std::string failure;
};

struct WorkPrecisionTable {
  std::string method;
  std::string problem;
  std::vector<WorkPrecisionRow> rows;
};

WorkPrecisionTable run_workprecision(const StudySpec& spec, ReferenceCache& cache);

void write_csv(std::ostream& out, const ConvergenceTable& t);
void write_csv(std::ostream& out, const WorkPrecisionTable& t);
nlohmann::json to_json(const ConvergenceTable& t);
nlohmann::json to_json(const WorkPrecisionTable& t);

struct StabilityExport {
  std::vector<std::filesystem::path> files;
  std::vector<std::pair<double, AreaResult>> areas;  // by alpha
};

/// Writes implicit_region.csv, explicit_region.csv, constrained_regions.csv (one
/// block per alpha in {pi/2, pi/3, pi/4}) and areas.json into `dir`.
StabilityExport emit_stability(const ImexGlmMethod& m, const StabilityQuery& q,
                               const std::filesystem::path& dir);

}  // namespace imexglm
