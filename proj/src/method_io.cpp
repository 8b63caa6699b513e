#include "imexglm/method_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "imexglm/errors.hpp"

namespace imexglm {

using nlohmann::json;

namespace io {

namespace {

bool parse_decimal(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  out = std::strtod(begin, &end);
  return end == begin + text.size() && errno != ERANGE;
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_number(const json& value, const std::string& field) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) throw ParseError(field, "expected a number or a decimal string");
  const auto text = value.get<std::string>();
  double out = 0.0;
  if (parse_decimal(text, out)) return out;
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    double num = 0.0, den = 0.0;
    if (parse_decimal(text.substr(0, slash), num) && parse_decimal(text.substr(slash + 1), den) &&
        den != 0.0)
      return num / den;
  }
  throw ParseError(field, "cannot read '" + text + "' as a number");
}

int parse_size(const json& j, const std::string& field) {
  if (!j.contains(field)) throw ParseError(field, "missing");
  const auto& value = j.at(field);
  if (!value.is_number_integer() || value.get<long long>() < 1)
    throw ParseError(field, "expected a positive integer");
  return value.get<int>();
}

VectorXd parse_vector(const json& j, const std::string& field, Eigen::Index expected_size) {
  if (!j.contains(field)) throw ParseError(field, "missing");
  const auto& arr = j.at(field);
  if (!arr.is_array()) throw ParseError(field, "expected an array");
  if (static_cast<Eigen::Index>(arr.size()) != expected_size)
    throw ShapeError(field + " has length " + std::to_string(arr.size()) + ", expected " +
                     std::to_string(expected_size));
  VectorXd v(expected_size);
  for (Eigen::Index i = 0; i < expected_size; ++i)
    v(i) = parse_number(arr[i], field + "[" + std::to_string(i) + "]");
  return v;
}

MatrixXd parse_matrix(const json& j, const std::string& field, Eigen::Index rows, Eigen::Index cols) {
  if (!j.contains(field)) throw ParseError(field, "missing");
  const auto& arr = j.at(field);
  if (!arr.is_array()) throw ParseError(field, "expected an array of rows");
  if (static_cast<Eigen::Index>(arr.size()) != rows)
    throw ShapeError(field + " has " + std::to_string(arr.size()) + " rows, expected " +
                     std::to_string(rows));
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = arr[i];
    if (!row.is_array()) throw ParseError(field, "row " + std::to_string(i) + " is not an array");
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw ShapeError(field + " row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                       " entries, expected " + std::to_string(cols));
    for (Eigen::Index k = 0; k < cols; ++k)
      m(i, k) = parse_number(row[k], field + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
  }
  return m;
}

json vector_to_json(const VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(format_number(v(i)));
  return arr;
}

json matrix_to_json(const MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_to_json(m.row(i).transpose()));
  return rows;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("<document>", e.what());
  }
}

void write_json_file(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace io

json method_to_json(const ImexGlmMethod& m) {
  json j;
  j["name"] = m.name;
  j["s"] = m.s();
  j["r"] = m.r();
  j["p"] = m.p();
  j["q"] = m.q();
  j["c"] = io::vector_to_json(m.c());
  j["A"] = io::matrix_to_json(m.explicit_part.A);
  j["Ahat"] = io::matrix_to_json(m.implicit_part.A);
  j["B"] = io::matrix_to_json(m.explicit_part.B);
  j["Bhat"] = io::matrix_to_json(m.implicit_part.B);
  j["v"] = io::vector_to_json(m.v);
  j["Q"] = io::matrix_to_json(m.Q);
  j["Qhat"] = io::matrix_to_json(m.Qhat);
  return j;
}

ImexGlmMethod method_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("<document>", "expected a JSON object");
  const std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>()
                                                                        : std::string("unnamed");
  const int s = io::parse_size(j, "s");
  const int r = io::parse_size(j, "r");
  const int p = io::parse_size(j, "p");
  const int q = io::parse_size(j, "q");
  if (r != s || p != s || q != s)
    throw ShapeError("only p = q = r = s methods are supported (s = " + std::to_string(s) + ")");

  const VectorXd c = io::parse_vector(j, "c", s);
  const MatrixXd A = io::parse_matrix(j, "A", s, s);
  const MatrixXd Ahat = io::parse_matrix(j, "Ahat", s, s);
  const MatrixXd B = io::parse_matrix(j, "B", r, s);
  const MatrixXd Bhat = io::parse_matrix(j, "Bhat", r, s);
  const VectorXd v = io::parse_vector(j, "v", r);
  const MatrixXd Q = io::parse_matrix(j, "Q", r, p + 1);
  const MatrixXd Qhat = io::parse_matrix(j, "Qhat", r, p + 1);

  return make_dimsim_pair(name, c, A, B, Ahat, Bhat, v, Q, Qhat);
}

ImexGlmMethod read_method_file(const std::filesystem::path& path) {
  return method_from_json(io::read_json_file(path));
}

void write_method_file(const ImexGlmMethod& m, const std::filesystem::path& path) {
  io::write_json_file(method_to_json(m), path);
}

}  // namespace imexglm
