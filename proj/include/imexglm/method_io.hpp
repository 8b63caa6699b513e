#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "imexglm/glm_tableau.hpp"

namespace imexglm {

// Coefficient files are JSON objects. Every number is written as a decimal
// string with 17 significant digits so that a write/read cycle reproduces each
// double bit for bit. Readers also accept plain JSON numbers and "a/b"
// fractions.
//
// IMEX-GLM fields: name, s, r, p, q, c, A, Ahat, B, Bhat, v, Q, Qhat.
// Matrices are arrays of rows.

nlohmann::json method_to_json(const ImexGlmMethod& m);
ImexGlmMethod method_from_json(const nlohmann::json& j);

ImexGlmMethod read_method_file(const std::filesystem::path& path);
void write_method_file(const ImexGlmMethod& m, const std::filesystem::path& path);

namespace io {

std::string format_number(double x);
double parse_number(const nlohmann::json& value, const std::string& field);
VectorXd parse_vector(const nlohmann::json& j, const std::string& field, Eigen::Index expected_size);
MatrixXd parse_matrix(const nlohmann::json& j, const std::string& field, Eigen::Index rows,
                      Eigen::Index cols);
int parse_size(const nlohmann::json& j, const std::string& field);
nlohmann::json vector_to_json(const VectorXd& v);
nlohmann::json matrix_to_json(const MatrixXd& m);
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace io

}  // namespace imexglm
