#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace svdmds::io {

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double value);

/// Row-major CSV, one matrix row per line, no header.
std::string matrix_to_csv(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_csv(std::string_view text);

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

/// Nested-array JSON form of a matrix (array of rows).
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// FNV-1a, used for config fingerprints.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace svdmds::io
