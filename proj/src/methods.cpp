#include "imexglm/methods.hpp"

#include <cmath>
#include <initializer_list>

#include "imexglm/errors.hpp"
#include "imexglm/method_io.hpp"

namespace imexglm {

namespace {

MatrixXd rows(std::initializer_list<std::initializer_list<double>> values) {
  const auto n_rows = static_cast<Eigen::Index>(values.size());
  const auto n_cols = static_cast<Eigen::Index>(values.begin()->size());
  MatrixXd m(n_rows, n_cols);
  Eigen::Index i = 0;
  for (const auto& row : values) {
    Eigen::Index k = 0;
    for (double x : row) m(i, k++) = x;
    ++i;
  }
  return m;
}

VectorXd vec(std::initializer_list<double> values) {
  VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

// Coefficients to 15 digits as published; B, Bhat, Q and Qhat are the stored
// tables, not recomputed values.
ImexGlmMethod make_dimsim4() {
  const MatrixXd A = rows({
      {0, 0, 0, 0},
      {0.258897065974412, 0, 0, 0},
      {2.729801825357062, -0.060004247312668, 0, 0},
      {0.951308318232761, 0.614160494289040, 0.422498793609078, 0},
  });
  const MatrixXd B = rows({
      {5.669708110906782, -0.493235358869745, 0.021475944586626, 0.175951726795284},
      {5.544708110906782, 0.020653530019144, -0.797968499857818, 0.680943549709761},
      {4.720814974705226, 3.191226074825372, -5.227438428178271, 0.686166890688894},
      {4.848863779632135, 2.337640759837926, -3.218585217497575, 0.418013495315584},
  });
  const MatrixXd Q = rows({
      {1, 0, 0, 0, 0},
      {1, 0.074436267358921, 0.055555555555556, 0.006172839506173, 0.000514403292181},
      {1, -2.003130911377728, 0.242223637993112, 0.052716285344531, 0.008600849263247},
      {1, -0.987967606130879, 0.013613972830935, 0.038658018404147, 0.017011414548385},
  });
  const MatrixXd Ahat = rows({
      {0.572816062482135, 0, 0, 0},
      {0.294478591621391, 0.572816062482135, 0, 0},
      {3.754531024312379, -0.446626145372372, 0.572816062482135, 0},
      {20.906355951077522, -6.918033573971423, 0.824272703722306, 0.572816062482135},
  });
  const MatrixXd Bhat = rows({
      {2.818382755109841, -0.107847984112942, 1.213319973963157, -0.548700992864529},
      {3.266198817591976, -1.885223345152593, 3.830771904411522, -1.797738883043436},
      {3.774131970777119, -3.469139895411032, 5.100995462482731, -4.672071998026633},
      {1.800600620848989, 6.203817506581311, -13.407704583723200, -5.034154872439978},
  });
  const MatrixXd Qhat = rows({
      {1, -0.572816062482135, 0, 0, 0},
      {1, -0.533961320770192, -0.135383131938489, -0.025650275076168, -0.003021498328079},
      {1, -3.214054274755475, -0.010779770975077, -0.053097178648182, -0.017299808772539},
      {1, -14.385411143310540, 1.683679993026802, 0.081422122041277, -0.051803591005091},
  });
  const VectorXd v = vec({0.281364340879037, -1.282889560784121, 2.266595749735792, -0.265070529830707});
  VectorXd c(4);
  c << 0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0;
  return make_dimsim_pair("IMEX-DIMSIM4", c, A, B, Ahat, Bhat, v, Q, Qhat);
}

ImexGlmMethod make_dimsim5() {
  const MatrixXd A = rows({
      {0, 0, 0, 0, 0},
      {0.380631951399918, 0, 0, 0, 0},
      {-0.723344119927179, 0.934338548518619, 0, 0, 0},
      {-0.292421654731536, 1.489386717103117, 0.229042913082062, 0, 0},
      {10.333193352608074, 0.200217292186561, 0.841800685401247, -0.148918889975160, 0},
  });
  const MatrixXd B = rows({
      {-1.811278483713069, 2.072219536433343, 0.130011155311711, 0.166279568600910, 0.117403740739418},
      {-1.724125705935292, 1.629858425322231, 1.038344488645044, -0.796914875843534, 0.396841233783945},
      {-1.998394810009466, 3.088356723470882, -2.146707663207811, 2.854109498231544, -0.833722659704275},
      {-1.361504766226497, 0.334933035918415, 2.154212895587752, 0.353113262914561, -1.482126886275562},
      {5.091061924499312, -29.458910962376240, 55.143920860593482, -43.440447985319850, 3.112719239754878},
  });
  const MatrixXd Q = rows({
      {1, 0, 0, 0, 0, 0},
      {1, -0.130631951399918, 0.031250000000000, 0.002604166666667, 0.000162760416667, 0.000008138020833},
      {1, 0.289005571408560, -0.108584637129655, -0.008364746307874, 0.000170993363233, 0.000108343335202},
      {1, -0.676007975453643, -0.205618135816810, -0.004861199044730, 0.004533255151668, 0.001138659940362},
      {1, -10.226292440220721, 0.140734501734106, 0.097068228416195, 0.034078612640450, 0.008071842745668},
  });
  const MatrixXd Ahat = rows({
      {0.278053841136452, 0, 0, 0, 0},
      {0.220452276182580, 0.278053841136452, 0, 0, 0},
      {2.294819895736366, -0.602366708071285, 0.278053841136452, 0, 0},
      {5.054620901153854, -1.529876218309763, 0.097119141498823, 0.278053841136452, 0},
      {9.345167780108133, -1.412133513099773, -1.883401998517870, 0.782533955446870, 0.278053841136452},
  });
  const MatrixXd Bhat = rows({
      {6.044855283302179, -2.020000467205476, 0.032934533641225, 0.593578985923315, -0.226664851205853},
      {5.853954219943505, -1.072092372634326, -1.839270544389963, 2.410922952843391, -0.899263047489796},
      {6.004175007913425, -2.014097375842605, 0.610845429880394, -0.963490004887004, -0.405182760273902},
      {6.002703177071046, -2.556003283230891, 3.151551366098853, -5.493514217893924, 0.448102618067392},
      {4.481882795290198, 2.672564354868939, -1.413660973235832, -8.058154793746990, 0.909905877341711},
  });
  const MatrixXd Qhat = rows({
      {1, -0.278053841136452, 0, 0, 0, 0},
      {1, -0.248506117319032, -0.038263460284113, -0.006085015868847, -0.000561338127960, -0.000037118138206},
      {1, -1.470507028801533, 0.136564756449595, 0.004900562818504, -0.001619958388074, -0.000365640421568},
      {1, -3.149917665479366, 0.406619102975690, 0.027778596315200, -0.004406329750951, -0.001692120959916},
      {1, -6.110220065073812, 0.929780069812273, 0.087106493228110, -0.016782586272280, -0.008434321001423},
  });
  const VectorXd v = vec({-0.079385465132435, 0.554317572910577, -1.569589549144155, 2.332074592443682, -0.237417151077669});
  VectorXd c(5);
  c << 0.0, 0.25, 0.5, 0.75, 1.0;
  return make_dimsim_pair("IMEX-DIMSIM5", c, A, B, Ahat, Bhat, v, Q, Qhat);
}

ImexGlmMethod make_imex_euler() {
  const MatrixXd one = MatrixXd::Ones(1, 1);
  return make_dimsim_pair("IMEX-Euler", VectorXd::Zero(1), MatrixXd::Zero(1, 1), one, one, one,
                          VectorXd::Ones(1), rows({{1.0, 0.0}}), rows({{1.0, -1.0}}));
}

ImexRkMethod make_ars443() {
  ImexRkMethod m;
  m.name = "ARS(4,4,3)";
  m.stages = 5;
  m.explicit_part.A = rows({
      {0, 0, 0, 0, 0},
      {1.0 / 2, 0, 0, 0, 0},
      {11.0 / 18, 1.0 / 18, 0, 0, 0},
      {5.0 / 6, -5.0 / 6, 1.0 / 2, 0, 0},
      {1.0 / 4, 7.0 / 4, 3.0 / 4, -7.0 / 4, 0},
  });
  m.explicit_part.b = vec({1.0 / 4, 7.0 / 4, 3.0 / 4, -7.0 / 4, 0});
  m.implicit_part.A = rows({
      {0, 0, 0, 0, 0},
      {0, 1.0 / 2, 0, 0, 0},
      {0, 1.0 / 6, 1.0 / 2, 0, 0},
      {0, -1.0 / 2, 1.0 / 2, 1.0 / 2, 0},
      {0, 3.0 / 2, -3.0 / 2, 1.0 / 2, 1.0 / 2},
  });
  m.implicit_part.b = vec({0, 3.0 / 2, -3.0 / 2, 1.0 / 2, 1.0 / 2});
  m.explicit_part.c = vec({0, 1.0 / 2, 2.0 / 3, 1.0 / 2, 1});
  m.implicit_part.c = m.explicit_part.c;
  m.check();
  return m;
}

}  // namespace

const ImexGlmMethod& builtin_imex_dimsim4() {
  static const ImexGlmMethod m = make_dimsim4();
  return m;
}

const ImexGlmMethod& builtin_imex_dimsim5() {
  static const ImexGlmMethod m = make_dimsim5();
  return m;
}

const ImexGlmMethod& builtin_imex_euler() {
  static const ImexGlmMethod m = make_imex_euler();
  return m;
}

const ImexGlmMethod& builtin_method(const std::string& name) {
  if (name == "dimsim4") return builtin_imex_dimsim4();
  if (name == "dimsim5") return builtin_imex_dimsim5();
  if (name == "imex-euler") return builtin_imex_euler();
  throw Error("unknown built-in method '" + name + "'");
}

const ImexRkMethod& builtin_ars443() {
  static const ImexRkMethod m = make_ars443();
  return m;
}

ImexRkMethod imex_euler_as_ark() {
  ImexRkMethod m;
  m.name = "IMEX-Euler (ARK form)";
  m.stages = 2;
  m.explicit_part.A = rows({{0, 0}, {1, 0}});
  m.explicit_part.b = vec({1, 0});
  m.implicit_part.A = rows({{0, 0}, {0, 1}});
  m.implicit_part.b = vec({0, 1});
  m.explicit_part.c = vec({0, 1});
  m.implicit_part.c = m.explicit_part.c;
  m.check();
  return m;
}

void ImexRkMethod::check() const {
  const Eigen::Index n = stages;
  if (n < 1) throw ShapeError("ARK method needs at least one stage");
  for (const auto* part : {&explicit_part, &implicit_part}) {
    if (part->A.rows() != n || part->A.cols() != n || part->b.size() != n || part->c.size() != n)
      throw ShapeError("ARK tableau sizes do not match sigma = " + std::to_string(n));
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      if (explicit_part.A(i, j) != 0.0) throw ShapeError("explicit ARK matrix is not strictly lower triangular");
      if (j > i && implicit_part.A(i, j) != 0.0)
        throw ShapeError("implicit ARK matrix is not lower triangular");
    }
  if ((explicit_part.c - implicit_part.c).cwiseAbs().maxCoeff() > 1e-12)
    throw ParseError("c_implicit", "explicit and implicit abscissae differ");
}

nlohmann::json ark_to_json(const ImexRkMethod& m) {
  nlohmann::json j;
  j["name"] = m.name;
  j["sigma"] = m.stages;
  j["c"] = io::vector_to_json(m.explicit_part.c);
  j["A_explicit"] = io::matrix_to_json(m.explicit_part.A);
  j["b_explicit"] = io::vector_to_json(m.explicit_part.b);
  j["A_implicit"] = io::matrix_to_json(m.implicit_part.A);
  j["b_implicit"] = io::vector_to_json(m.implicit_part.b);
  return j;
}

ImexRkMethod ark_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("<document>", "expected a JSON object");
  ImexRkMethod m;
  m.name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "unnamed";
  m.stages = io::parse_size(j, "sigma");
  const Eigen::Index n = m.stages;
  m.explicit_part.c = io::parse_vector(j, "c", n);
  m.explicit_part.A = io::parse_matrix(j, "A_explicit", n, n);
  m.explicit_part.b = io::parse_vector(j, "b_explicit", n);
  m.implicit_part.A = io::parse_matrix(j, "A_implicit", n, n);
  m.implicit_part.b = io::parse_vector(j, "b_implicit", n);
  m.implicit_part.c = j.contains("c_implicit") ? io::parse_vector(j, "c_implicit", n) : m.explicit_part.c;
  m.check();
  return m;
}

ImexRkMethod load_ark_method(const std::filesystem::path& path) {
  return ark_from_json(io::read_json_file(path));
}

void write_ark_method(const ImexRkMethod& m, const std::filesystem::path& path) {
  io::write_json_file(ark_to_json(m), path);
}

}  // namespace imexglm
