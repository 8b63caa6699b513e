// Command-line driver: validation, integration runs, convergence and
// work-precision studies, stability exports and explicit-part optimization.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "imexglm/errors.hpp"
#include "imexglm/harness.hpp"
#include "imexglm/method_io.hpp"
#include "imexglm/validation.hpp"

using namespace imexglm;

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailed = 1;
constexpr int kRuntimeFailure = 2;
constexpr int kUsage = 64;

struct Options {
  std::string method = "dimsim4";
  std::string problem = "allen-cahn";
  std::string steps = "25,50,100,200";
  std::string starter = "ars443";
  std::string out;
  std::string format = "csv";
  double tau_ratio = 0.5;
  int n = 0;
  long reference_steps = 0;
  std::uint64_t seed = 1;
  long budget = 2000;
  int repeats = 3;
  int lines = 30;
  int angles = 33;
  double tol = 1e-3;
  bool seed_from_method = false;
};

std::vector<long> parse_steps(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || v < 1) throw CLI::ValidationError("--steps", "bad step count '" + item + "'");
    out.push_back(v);
  }
  return out;
}

StudySpec study_from(const Options& o) {
  StudySpec s;
  s.method = o.method;
  s.problem.name = o.problem;
  s.problem.n = o.n;
  s.problem.reference_steps = o.reference_steps;
  s.steps = parse_steps(o.steps);
  s.start.tau_ratio = o.tau_ratio;
  s.start.auxiliary = load_starter(o.starter);
  s.repeats = o.repeats;
  return s;
}

// Writes to --out when given, else stdout.
void emit(const Options& o, const std::function<void(std::ostream&)>& body) {
  if (o.out.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw Error("cannot write " + o.out);
  body(f);
}

ImexGlmMethod require_glm(const std::string& selector) {
  AnyMethod m = load_any_method(selector);
  if (auto* glm = std::get_if<ImexGlmMethod>(&m)) return *glm;
  throw Error("'" + selector + "' is an additive Runge-Kutta method; a general linear method is required");
}

StabilityQuery query_from(const Options& o) {
  StabilityQuery q;
  q.lines = o.lines;
  q.angle_count = o.angles;
  q.tol = o.tol;
  return q;
}

int cmd_validate(const Options& o) {
  const ImexGlmMethod m = require_glm(o.method);
  const MethodValidationReport r = validate_method(m);
  if (o.format == "json") {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks)
      checks.push_back({{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"passed", c.passed}});
    std::cout << nlohmann::json{{"method", r.method}, {"passed", r.passed()}, {"checks", checks}}.dump(2) << '\n';
  } else {
    std::cout << "method " << r.method << '\n';
    for (const auto& c : r.checks)
      std::cout << (c.passed ? "  pass  " : "  FAIL  ") << c.name << "  residual " << io::format_number(c.residual)
                << "  tol " << io::format_number(c.tolerance) << '\n';
    std::cout << (r.passed() ? "valid\n" : "INVALID\n");
  }
  return r.passed() ? kOk : kValidationFailed;
}

int cmd_integrate(const Options& o) {
  StudySpec s = study_from(o);
  if (s.steps.size() != 1) throw CLI::ValidationError("--steps", "integrate takes a single step count");
  const AnyMethod m = load_any_method(s.method);
  const BenchmarkProblem bp = make_problem(s.problem);
  ReferenceCache cache;
  const Reference& ref = cache.get(s.problem, bp);
  const IntegrationResult res = run_once(m, bp.problem, s.steps[0], s.start, s.solver);
  const double err = l2_error(res.y, ref.y);
  std::cout << "method " << method_name(m) << "\nproblem " << s.problem.key() << "\nN " << s.steps[0]
            << "\nerror " << io::format_number(err) << "\nstart_seconds " << res.start_seconds
            << "\nstep_seconds " << res.step_seconds << "\nfactorizations " << res.factorizations << '\n';
  if (!o.out.empty()) {
    if (!bp.grid) throw Error("--out needs a grid problem");
    write_field_csv(o.out, error_field(res.y, ref.y, *bp.grid), *bp.grid);
  }
  return kOk;
}

int cmd_converge(const Options& o) {
  ReferenceCache cache;
  const ConvergenceTable t = run_convergence(study_from(o), cache);
  emit(o, [&](std::ostream& out) {
    if (o.format == "json")
      out << to_json(t).dump(2) << '\n';
    else
      write_csv(out, t);
  });
  for (const auto& r : t.rows)
    if (!r.failure.empty()) std::cerr << "N=" << r.N << ": " << r.failure << '\n';
  std::cerr << "least-squares order " << t.slope << ", reference self-check " << t.reference_self_check << '\n';
  return kOk;
}

int cmd_work_precision(const Options& o) {
  ReferenceCache cache;
  const WorkPrecisionTable t = run_workprecision(study_from(o), cache);
  emit(o, [&](std::ostream& out) {
    if (o.format == "json")
      out << to_json(t).dump(2) << '\n';
    else
      write_csv(out, t);
  });
  for (const auto& r : t.rows)
    if (!r.failure.empty()) std::cerr << "N=" << r.N << ": " << r.failure << '\n';
  return kOk;
}

int cmd_stability(const Options& o) {
  const ImexGlmMethod m = require_glm(o.method);
  const std::string dir = o.out.empty() ? "stability_" + o.method : o.out;
  const StabilityExport ex = emit_stability(m, query_from(o), dir);
  for (const auto& f : ex.files) std::cout << f.string() << '\n';
  for (const auto& [alpha, a] : ex.areas)
    std::cout << "alpha " << alpha << "  x_b " << a.x_b << "  area_upper " << a.area_upper << "  area_total "
              << a.area_total << (a.trivial ? "  (trivial)" : "") << '\n';
  return kOk;
}

int cmd_optimize(const Options& o) {
  const ImexGlmMethod m = require_glm(o.method);
  OptimizerOptions opt;
  opt.budget = o.budget;
  opt.seed = o.seed;
  if (o.seed_from_method) opt.start = m.explicit_part.A;
  const OptimizationResult res = optimize_explicit_component(m.implicit_part, m.c(), m.v, query_from(o), opt);
  std::cout << "evaluations " << res.evaluations << "\narea_total " << io::format_number(res.area) << '\n';
  if (!o.out.empty()) write_method_file(res.method, o.out);
  if (res.failed) {
    std::cerr << "optimization failed: no candidate with a non-trivial region\n";
    return kRuntimeFailure;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IMEX general linear methods: validation, integration and stability tools"};
  app.require_subcommand(1);
  Options o;

  auto add_method = [&](CLI::App* c) {
    c->add_option("--method", o.method, "dimsim4 | dimsim5 | imex-euler | coefficient file");
  };
  auto add_study = [&](CLI::App* c, std::string& steps) {
    add_method(c);
    c->add_option("--problem", o.problem, "allen-cahn | burgers | dahlquist")
        ->check(CLI::IsMember({"allen-cahn", "burgers", "dahlquist"}));
    c->add_option("--steps", steps, "comma-separated step counts");
    c->add_option("--tau-ratio", o.tau_ratio, "starting micro-step as a fraction of h")->check(CLI::Range(0.0, 1.0));
    c->add_option("--starter", o.starter, "ars443 | imex-euler | ARK coefficient file");
    c->add_option("--n", o.n, "grid parameter (dx = 1/n)");
    c->add_option("--reference-steps", o.reference_steps, "RK4 steps for the reference solution");
    c->add_option("--out", o.out, "output path");
    c->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_query = [&](CLI::App* c) {
    c->add_option("--lines", o.lines, "vertical lines for the area");
    c->add_option("--angles", o.angles, "stiff angles in [-pi/2, pi/2]");
    c->add_option("--tol", o.tol, "bisection tolerance");
  };

  auto* validate = app.add_subcommand("validate-method", "check coefficients against the order conditions");
  add_method(validate);
  validate->add_option("--format", o.format, "text | json")->check(CLI::IsMember({"csv", "text", "json"}));

  auto* integrate_cmd = app.add_subcommand("integrate", "single run with error against the reference");
  std::string single_steps = "100";
  add_study(integrate_cmd, single_steps);

  auto* converge = app.add_subcommand("converge", "convergence study");
  add_study(converge, o.steps);
  auto* wp = app.add_subcommand("work-precision", "timing versus error");
  add_study(wp, o.steps);
  wp->add_option("--repeats", o.repeats, "timing repeats (minimum is reported)");

  auto* stability = app.add_subcommand("stability", "write stability region boundaries and areas");
  add_method(stability);
  add_query(stability);
  stability->add_option("--out", o.out, "output directory");

  auto* optimize = app.add_subcommand("optimize-explicit", "maximize the constrained region over the explicit A");
  add_method(optimize);
  add_query(optimize);
  optimize->add_option("--seed", o.seed, "random seed");
  optimize->add_option("--budget", o.budget, "area evaluations");
  optimize->add_flag("--seed-from-method", o.seed_from_method, "start from the method's own explicit A");
  optimize->add_option("--out", o.out, "write the optimized method here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (integrate_cmd->parsed()) o.steps = single_steps;

  try {
    if (validate->parsed()) return cmd_validate(o);
    if (integrate_cmd->parsed()) return cmd_integrate(o);
    if (converge->parsed()) return cmd_converge(o);
    if (wp->parsed()) return cmd_work_precision(o);
    if (stability->parsed()) return cmd_stability(o);
    if (optimize->parsed()) return cmd_optimize(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsage;
}
