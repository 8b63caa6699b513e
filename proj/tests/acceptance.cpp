// Acceptance suite: one PASS/FAIL/SKIP line per criterion. Tolerances are fixed
// here. Run all criteria, or one with --only N.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "imexglm/harness.hpp"
#include "imexglm/integrator.hpp"
#include "imexglm/order_conditions.hpp"
#include "imexglm/stability.hpp"
#include "imexglm/validation.hpp"

using namespace imexglm;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Verdict {
  Outcome outcome;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

const std::vector<const ImexGlmMethod*>& dimsims() {
  static const std::vector<const ImexGlmMethod*> all{&builtin_imex_dimsim4(), &builtin_imex_dimsim5()};
  return all;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(4);
  s << x;
  return s.str();
}

Verdict pass_if(bool ok, const std::string& detail) { return {ok ? Outcome::Pass : Outcome::Fail, detail}; }

// 1. Recomputed B within 1e-8, recomputed Q within 1e-12, Q[2,1] spot value, under 1 s.
Verdict table_fidelity() {
  constexpr double kQTol = 1e-12, kBTol = 1e-8, kSeconds = 1.0;
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (const auto* m : dimsims()) {
    const auto report = validate_method(*m);
    double q = 0, b = 0;
    for (const char* name : {"Q_reproduction", "Qhat_reproduction"}) q = std::max(q, report.find(name)->residual);
    for (const char* name : {"B_explicit_reproduction", "B_implicit_reproduction"})
      b = std::max(b, report.find(name)->residual);
    ok = ok && report.passed() && q <= kQTol && b <= kBTol;
    detail += m->name + ": Q " + fmt(q) + ", B " + fmt(b) + "; ";
  }
  const auto& m4 = builtin_imex_dimsim4();
  const double spot = starting_weight_matrix(m4.explicit_part.A, m4.c(), 4)(1, 1);
  const double spot_err = std::abs(spot - 0.074436267358921);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  ok = ok && spot_err <= kQTol && secs < kSeconds;
  return pass_if(ok, detail + "Q[2,1] error " + fmt(spot_err) + ", " + fmt(secs) + " s");
}

// 2. rho(M(-1e8)) < 1e-5, imaginary axis <= 1 + 1e-12, IRKS residual < 1e-6 at 20 points.
Verdict l_stability() {
  constexpr double kIrksTol = 1e-6, kSeconds = 1.0;
  const auto t0 = Clock::now();
  const auto samples = left_half_plane_samples(20, 11);
  bool ok = true;
  std::string detail;
  for (const auto* m : dimsims()) {
    const StabilityReport L = check_L_stability(m->implicit_part);
    const StabilityReport irks = check_irks(m->implicit_part, samples);
    const auto* far = L.find("rho_at_minus_1e8");
    const auto* axis = L.find("imaginary_axis");
    const auto* small = irks.find("small_eigenvalues");
    ok = ok && far->passed && axis->passed && small->residual < kIrksTol;
    detail += m->name + ": rho(-1e8) " + fmt(far->residual) + ", axis excess " + fmt(axis->residual) +
              ", IRKS " + fmt(small->residual) + "; ";
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return pass_if(ok && secs < kSeconds, detail + fmt(secs) + " s");
}

// 3. Areas 1.34 and 0.83 within 10 %, IMEX-Euler pi within 3 %, under 2 min.
Verdict stability_areas() {
  constexpr double kRel = 0.10, kEulerRel = 0.03, kSeconds = 120.0;
  const auto t0 = Clock::now();
  const StabilityQuery q;
  const double a4 = constrained_region_area(builtin_imex_dimsim4(), q).area_total;
  const double a5 = constrained_region_area(builtin_imex_dimsim5(), q).area_total;
  const double ae = constrained_region_area(builtin_imex_euler(), q).area_total;
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool ok = std::abs(a4 - 1.34) <= kRel * 1.34 && std::abs(a5 - 0.83) <= kRel * 0.83 &&
                  std::abs(ae - std::numbers::pi) <= kEulerRel * std::numbers::pi && secs < kSeconds;
  return pass_if(ok, "DIMSIM4 " + fmt(a4) + " (1.34), DIMSIM5 " + fmt(a5) + " (0.83), Euler " + fmt(ae) +
                         " (pi), " + fmt(secs) + " s");
}

// 4. One step on the split test equation equals M(w, what) y^[0] within 1e-12 at 50 points.
Verdict matrix_consistency() {
  constexpr double kTol = 1e-12;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (const auto* m : dimsims()) {
    int tested = 0;
    while (tested < 50) {
      const Complex w(-1.2 * std::abs(u(rng)), 0.8 * u(rng)), what(-50 * std::abs(u(rng)), 50 * u(rng));
      const MatrixXcd M = imex_stability_matrix(*m, w, what);
      if (spectral_radius(M) >= 1.0) continue;
      ++tested;
      ExternalState s;
      s.h = 1.0;
      s.blocks = MatrixXd::Random(2, m->r());
      const ExternalState next = glm_step(*m, dahlquist_split_problem(w, what), s);
      Eigen::VectorXcd before(m->r()), after(m->r());
      for (int k = 0; k < m->r(); ++k) {
        before(k) = Complex(s.blocks(0, k), s.blocks(1, k));
        after(k) = Complex(next.blocks(0, k), next.blocks(1, k));
      }
      const Eigen::VectorXcd expected = M * before;
      worst = std::max(worst, (after - expected).norm() / std::max(1.0, expected.norm()));
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return pass_if(worst <= kTol && secs < 1.0, "max relative difference " + fmt(worst) + ", " + fmt(secs) + " s");
}

// 5. Least-squares slopes >= 3.5 / 4.5 on both PDEs, reference self-check < 1e-10.
Verdict convergence() {
  constexpr double kSlope4 = 3.5, kSlope5 = 4.5, kSelfCheck = 1e-10, kSeconds = 600.0;
  const auto t0 = Clock::now();
  ReferenceCache cache;
  bool ok = true;
  std::string detail;
  for (const char* problem : {"allen-cahn", "burgers"}) {
    for (const char* method : {"dimsim4", "dimsim5"}) {
      StudySpec s;
      s.problem.name = problem;
      s.method = method;
      const ConvergenceTable t = run_convergence(s, cache);
      const double need = std::string(method) == "dimsim4" ? kSlope4 : kSlope5;
      ok = ok && t.slope >= need && t.reference_self_check < kSelfCheck;
      detail += std::string(problem) + "/" + method + " " + fmt(t.slope) + " (ref " + fmt(t.reference_self_check) +
                "); ";
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  return pass_if(ok && secs < kSeconds, detail + fmt(secs) + " s");
}

// 6. Fourth-order ARK comparator reduces to order in [1.5, 3] on Allen-Cahn while DIMSIM4 keeps >= 3.5.
Verdict ark_order_reduction(const std::filesystem::path& data_dir) {
  std::filesystem::path file;
  if (const char* env = std::getenv("IMEXGLM_ARK4_FILE")) file = env;
  else file = data_dir / "ark4.json";
  if (!std::filesystem::exists(file))
    return {Outcome::Skip, "no ARK coefficient file (set IMEXGLM_ARK4_FILE or add " + file.string() + ")"};
  ReferenceCache cache;
  StudySpec s;
  s.method = file.string();
  const double ark = run_convergence(s, cache).slope;
  s.method = "dimsim4";
  const double glm = run_convergence(s, cache).slope;
  return pass_if(ark >= 1.5 && ark <= 3.0 && glm >= 3.5, "ARK " + fmt(ark) + ", DIMSIM4 " + fmt(glm));
}

// 7. y' = f(t), f polynomial of degree <= r-2, g = 0: y^[0] equals the Taylor combination within 1e-11.
Verdict starting_exactness() {
  constexpr double kTol = 1e-11;
  double worst = 0.0;
  for (const auto* m : dimsims()) {
    const int r = m->r();
    // f(t) = sum_{k <= r-2} a_k t^k, so x^(k+1)(0) = k! a_k.
    std::vector<double> a(static_cast<std::size_t>(r - 1));
    for (int k = 0; k < r - 1; ++k) a[k] = 1.0 / (k + 1) - 0.3 * k;
    SemiDiscreteProblem p;
    p.dimension = 1;
    p.f = [a](double t, const VectorXd&) -> VectorXd {
      double v = 0.0;
      for (std::size_t k = a.size(); k-- > 0;) v = v * t + a[k];
      return VectorXd::Constant(1, v);
    };
    p.g = [](double, const VectorXd& y) -> VectorXd { return VectorXd::Zero(y.size()); };
    p.stiff_jacobian = [](double, const VectorXd&) -> Jacobian { return MatrixXd::Zero(1, 1); };
    p.linear_stiff = true;
    p.y0 = VectorXd::Constant(1, 0.7);
    const double h = 0.1;
    const ExternalState s = initialize_external(*m, p, h);
    for (int i = 0; i < r; ++i) {
      double expected = 0.7;
      for (int k = 1; k <= r - 1; ++k) expected += m->Q(i, k) * std::pow(h, k) * std::tgamma(k) * a[k - 1];
      worst = std::max(worst, std::abs(s.blocks(0, i) - expected));
    }
  }
  return pass_if(worst <= kTol, "max block error " + fmt(worst));
}

// 8. Seeded search never loses the seed; random starts with 2000 evaluations reach 0.9 x 1.34..., under 30 min.
Verdict optimizer() {
  constexpr double kFraction = 0.9, kSeconds = 1800.0;
  constexpr long kBudget = 2000;
  const auto t0 = Clock::now();
  const auto& m = builtin_imex_dimsim4();
  const StabilityQuery q;
  const double table_area = constrained_region_area(m, q).area_total;

  OptimizerOptions seeded;
  seeded.budget = 40;
  seeded.start = m.explicit_part.A;
  const double seeded_area = optimize_explicit_component(m.implicit_part, m.c(), m.v, q, seeded).area;

  // One retry with the next seed is permitted for this criterion.
  double best = 0.0;
  int attempts = 0;
  for (std::uint64_t seed : {1u, 2u}) {
    ++attempts;
    OptimizerOptions random;
    random.budget = kBudget;
    random.seed = seed;
    best = std::max(best, optimize_explicit_component(m.implicit_part, m.c(), m.v, q, random).area);
    if (best >= kFraction * table_area) break;
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool ok = seeded_area >= table_area && best >= kFraction * table_area && secs < kSeconds;
  return pass_if(ok, "seed " + fmt(table_area) + " -> " + fmt(seeded_area) + "; random best " + fmt(best) +
                         " vs target " + fmt(kFraction * table_area) + " (" + std::to_string(attempts) +
                         " attempt(s)), " + fmt(secs) + " s");
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  std::filesystem::path data_dir = "data";
  for (int k = 1; k < argc; ++k) {
    const std::string arg = argv[k];
    if (arg == "--only" && k + 1 < argc) only = std::atoi(argv[++k]);
    else if (arg == "--data" && k + 1 < argc) data_dir = argv[++k];
    else {
      std::cerr << "usage: acceptance [--only N] [--data DIR]\n";
      return 64;
    }
  }

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"table fidelity", table_fidelity},
      {"L-stability and IRKS", l_stability},
      {"constrained stability areas", stability_areas},
      {"stability matrix matches one step", matrix_consistency},
      {"convergence without order reduction", convergence},
      {"ARK order reduction (conditional)", [&] { return ark_order_reduction(data_dir); }},
      {"starting procedure exactness", starting_exactness},
      {"optimizer sanity", optimizer},
  };

  int failures = 0, skipped = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k + 1);
    if (only != 0 && only != id) continue;
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {Outcome::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = v.outcome == Outcome::Pass ? "PASS" : v.outcome == Outcome::Fail ? "FAIL" : "SKIP";
    std::cout << tag << "  " << id << ". " << criteria[k].first << ": " << v.detail << std::endl;
    if (v.outcome == Outcome::Fail) ++failures;
    if (v.outcome == Outcome::Skip) ++skipped;
  }
  if (failures > 0) return 1;
  return only != 0 && skipped > 0 ? 77 : 0;  // 77: skipped, as understood by ctest
}
