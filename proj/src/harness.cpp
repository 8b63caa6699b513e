#include "imexglm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>

#include "imexglm/errors.hpp"
#include "imexglm/method_io.hpp"

namespace imexglm {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_builtin(const std::string& s) { return s == "dimsim4" || s == "dimsim5" || s == "imex-euler"; }

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

AnyMethod load_any_method(const std::string& selector) {
  if (is_builtin(selector)) return builtin_method(selector);
  const json j = io::read_json_file(selector);
  if (j.is_object() && j.contains("A_explicit")) return ark_from_json(j);
  return method_from_json(j);
}

std::string method_name(const AnyMethod& m) {
  return std::visit([](const auto& x) { return x.name; }, m);
}

ImexRkMethod load_starter(const std::string& selector) {
  if (selector == "ars443") return builtin_ars443();
  if (selector == "imex-euler") return imex_euler_as_ark();
  return load_ark_method(selector);
}

int ProblemSpec::resolved_n() const {
  if (n > 0) return n;
  return name == "burgers" ? 50 : 40;
}

long ProblemSpec::resolved_reference_steps() const {
  if (reference_steps > 0) return reference_steps;
  return name == "burgers" ? 20000 : 5000;
}

std::string ProblemSpec::key() const {
  if (name == "dahlquist") return name + ":" + io::format_number(xi) + ":" + io::format_number(xihat);
  return name + ":n=" + std::to_string(resolved_n()) + ":ref=" + std::to_string(resolved_reference_steps());
}

BenchmarkProblem make_problem(const ProblemSpec& spec) {
  BenchmarkProblem out;
  if (spec.name == "allen-cahn" || spec.name == "burgers") {
    PdeBenchmark b = spec.name == "allen-cahn" ? allen_cahn_problem(spec.resolved_n())
                                               : burgers_problem(spec.resolved_n());
    out.problem = std::move(b.problem);
    out.grid = b.grid;
  } else if (spec.name == "dahlquist") {
    out.problem = dahlquist_split_problem(spec.xi, spec.xihat);
    out.exact_final = out.problem.y0 * std::exp((spec.xi + spec.xihat) * (out.problem.tF - out.problem.t0));
  } else {
    throw Error("unknown problem '" + spec.name + "'");
  }
  return out;
}

const Reference& ReferenceCache::get(const ProblemSpec& spec, const BenchmarkProblem& problem,
                                     bool self_check) {
  Reference& ref = cache_[spec.key()];
  if (ref.y.size() == 0) {
    ref.y = problem.exact_final ? *problem.exact_final
                                : reference_solution(problem.problem, spec.resolved_reference_steps());
    if (problem.exact_final) ref.self_check = 0.0;
  }
  if (self_check && std::isnan(ref.self_check))
    ref.self_check = l2_error(ref.y, reference_solution(problem.problem, 2 * spec.resolved_reference_steps()));
  return ref;
}

void StudySpec::check() const {
  if (steps.empty()) throw Error("no step counts given");
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (steps[k] < 1) throw Error("step counts must be positive");
    if (k > 0 && steps[k] <= steps[k - 1]) throw Error("step counts must be strictly increasing");
  }
  if (repeats < 1) throw Error("repeats must be positive");
  start.check();
  solver.check();
}

IntegrationResult run_once(const AnyMethod& m, const SemiDiscreteProblem& prob, long N,
                           const StartingConfig& start, const StageSolveConfig& solver) {
  if (const auto* glm = std::get_if<ImexGlmMethod>(&m)) return integrate(*glm, prob, N, start, solver);
  return integrate_ark(std::get<ImexRkMethod>(m), prob, N, solver);
}

double least_squares_order(const std::vector<ConvergenceRow>& rows) {
  std::vector<double> lx, ly;
  for (const auto& r : rows)
    if (std::isfinite(r.error) && r.error > 0.0) {
      lx.push_back(std::log(static_cast<double>(r.N)));
      ly.push_back(std::log(r.error));
    }
  if (lx.size() < 2) return kNaN;
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) mx += lx[k] / n, my += ly[k] / n;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  return -sxy / sxx;
}

namespace {

std::string describe(const std::exception& e) {
  std::string msg = e.what();
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    msg += " <- " + describe(inner);
  } catch (...) {
  }
  return msg;
}

}  // namespace

ConvergenceTable run_convergence(const StudySpec& spec, ReferenceCache& cache) {
  spec.check();
  const AnyMethod method = load_any_method(spec.method);
  const BenchmarkProblem bp = make_problem(spec.problem);
  const Reference& ref = cache.get(spec.problem, bp, !bp.exact_final.has_value());

  ConvergenceTable table;
  table.method = method_name(method);
  table.problem = spec.problem.key();
  table.reference_self_check = ref.self_check;
  const double span = bp.problem.tF - bp.problem.t0;
  for (long N : spec.steps) {
    ConvergenceRow row;
    row.N = N;
    row.h = span / static_cast<double>(N);
    try {
      const IntegrationResult res = run_once(method, bp.problem, N, spec.start, spec.solver);
      row.error = l2_error(res.y, ref.y);
      if (!std::isfinite(row.error)) row.failure = "non-finite error";
    } catch (const std::exception& e) {
      row.error = kNaN;
      row.failure = describe(e);
    }
    if (!table.rows.empty()) {
      const auto& prev = table.rows.back();
      row.pairwise_order = std::log(prev.error / row.error) / std::log(static_cast<double>(N) / prev.N);
    }
    table.rows.push_back(row);
  }
  table.slope = least_squares_order(table.rows);
  return table;
}

WorkPrecisionTable run_workprecision(const StudySpec& spec, ReferenceCache& cache) {
  spec.check();
  const AnyMethod method = load_any_method(spec.method);
  const BenchmarkProblem bp = make_problem(spec.problem);
  const Reference& ref = cache.get(spec.problem, bp, false);

  WorkPrecisionTable table;
  table.method = method_name(method);
  table.problem = spec.problem.key();
  const double span = bp.problem.tF - bp.problem.t0;
  for (long N : spec.steps) {
    WorkPrecisionRow row;
    row.N = N;
    row.h = span / static_cast<double>(N);
    try {
      for (int k = 0; k < spec.repeats; ++k) {
        const IntegrationResult res = run_once(method, bp.problem, N, spec.start, spec.solver);
        row.seconds = k == 0 ? res.step_seconds : std::min(row.seconds, res.step_seconds);
        row.max_seconds = k == 0 ? res.step_seconds : std::max(row.max_seconds, res.step_seconds);
        row.start_seconds = k == 0 ? res.start_seconds : std::min(row.start_seconds, res.start_seconds);
        row.error = l2_error(res.y, ref.y);
      }
    } catch (const std::exception& e) {
      row.failure = describe(e);
    }
    table.rows.push_back(row);
  }
  return table;
}

void write_csv(std::ostream& out, const ConvergenceTable& t) {
  out << "N,h,error,pairwise_order\n";
  for (const auto& r : t.rows)
    out << r.N << ',' << io::format_number(r.h) << ',' << io::format_number(r.error) << ','
        << io::format_number(r.pairwise_order) << '\n';
  out << "# least_squares_order," << io::format_number(t.slope) << '\n';
}

void write_csv(std::ostream& out, const WorkPrecisionTable& t) {
  out << "N,h,seconds,error\n";
  for (const auto& r : t.rows)
    out << r.N << ',' << io::format_number(r.h) << ',' << io::format_number(r.seconds) << ','
        << io::format_number(r.error) << '\n';
}

json to_json(const ConvergenceTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"N", r.N},
                    {"h", r.h},
                    {"error", number_or_null(r.error)},
                    {"pairwise_order", number_or_null(r.pairwise_order)},
                    {"failure", r.failure}});
  return {{"method", t.method},
          {"problem", t.problem},
          {"rows", rows},
          {"least_squares_order", number_or_null(t.slope)},
          {"reference_self_check", number_or_null(t.reference_self_check)}};
}

json to_json(const WorkPrecisionTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"N", r.N},
                    {"h", r.h},
                    {"seconds", number_or_null(r.seconds)},
                    {"max_seconds", number_or_null(r.max_seconds)},
                    {"start_seconds", number_or_null(r.start_seconds)},
                    {"error", number_or_null(r.error)},
                    {"failure", r.failure}});
  return {{"method", t.method}, {"problem", t.problem}, {"rows", rows}};
}

namespace {

void write_boundary(std::ostream& out, const RegionBoundary& b, const std::string& prefix = "") {
  for (std::size_t k = 0; k < b.x.size(); ++k)
    out << prefix << io::format_number(b.x[k]) << ',' << io::format_number(b.y[k]) << ','
        << io::format_number(-b.y[k]) << '\n';
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

}  // namespace

StabilityExport emit_stability(const ImexGlmMethod& m, const StabilityQuery& q,
                               const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  StabilityExport out;

  const auto implicit_path = dir / "implicit_region.csv";
  {
    auto f = open_out(implicit_path);
    f << "x,y_upper,y_lower\n";
    write_boundary(f, region_boundary_points(m, q, RegionKind::Implicit));
  }
  const auto explicit_path = dir / "explicit_region.csv";
  {
    auto f = open_out(explicit_path);
    f << "x,y_upper,y_lower\n";
    write_boundary(f, region_boundary_points(m, q, RegionKind::Explicit));
  }

  const auto constrained_path = dir / "constrained_regions.csv";
  json areas = json::array();
  {
    auto f = open_out(constrained_path);
    f << "alpha,x,y_upper,y_lower\n";
    constexpr double pi = std::numbers::pi;
    for (double alpha : {pi / 2, pi / 3, pi / 4}) {
      StabilityQuery qa = q;
      qa.alpha = alpha;
      const AreaResult a = constrained_region_area(m, qa);
      write_boundary(f, a.boundary, io::format_number(alpha) + ",");
      areas.push_back({{"method", m.name},
                       {"alpha", alpha},
                       {"x_b", a.x_b},
                       {"area_upper", a.area_upper},
                       {"area_total", a.area_total},
                       {"trivial", a.trivial}});
      out.areas.emplace_back(alpha, a);
    }
  }
  const auto areas_path = dir / "areas.json";
  io::write_json_file(areas, areas_path);

  out.files = {implicit_path, explicit_path, constrained_path, areas_path};
  return out;
}

}  // namespace imexglm
