#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "svdmds/edm.hpp"

namespace test_support {

// Test-side randomness is a separate engine so the oracles never share
// draws with the code under test.
inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed,
                                     double lo = -1.0, double hi = 1.0) {
  std::mt19937 gen(static_cast<std::uint32_t>(seed));
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = dist(gen);
  return m;
}

inline Eigen::MatrixXd random_orthogonal(Eigen::Index d, std::uint64_t seed) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(d, d, seed));
  return qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
}

// Squared distances by the naive double loop over all ordered pairs.
inline Eigen::MatrixXd naive_edm(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd d(x.cols(), x.cols());
  for (Eigen::Index i = 0; i < x.cols(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      double s = 0;
      for (Eigen::Index k = 0; k < x.rows(); ++k) s += (x(k, i) - x(k, j)) * (x(k, i) - x(k, j));
      d(i, j) = s;
    }
  return d;
}

inline Eigen::MatrixXd dense_j(Eigen::Index n) {
  return Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / double(n));
}

inline Eigen::VectorXd jacobi_singular_values(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("svdmds_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace test_support
