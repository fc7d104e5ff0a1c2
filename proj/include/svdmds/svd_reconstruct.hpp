#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "svdmds/edm.hpp"
#include "svdmds/errors.hpp"
#include "svdmds/sampling.hpp"

namespace svdmds {

/// Estimated matrix plus the diagnostics shared by every completion routine.
template <typename Scalar = double>
struct CompletionResult {
  MatrixX<Scalar> d_hat;
  std::vector<Scalar> kept_singular_values;  // descending
  Scalar discarded_energy = Scalar(0);       // sum of squared discarded singular values
  Eigen::Index rank = 0;
  bool degenerate_spectrum = false;  // sigma_r == sigma_{r+1}

  // Iterative routines only.
  int iterations = 0;
  bool converged = true;
  std::vector<double> objective_history;
  std::vector<std::string> flags;
};

/// Best rank-r approximation together with the spectrum it was cut from.
template <typename Scalar = double>
struct TruncatedSvd {
  MatrixX<Scalar> approximation;
  MatrixX<Scalar> left;   // n x r, U_r
  MatrixX<Scalar> right;  // n x r, V_r
  std::vector<Scalar> kept;
  Scalar discarded_energy = Scalar(0);
  bool degenerate = false;
};

namespace detail {

template <typename Scalar>
bool tied(Scalar a, Scalar b, Scalar scale) {
  using std::abs;
  return abs(a - b) <= Scalar(64) * Eigen::NumTraits<Scalar>::epsilon() * scale;
}

}  // namespace detail

/// Keeps the r largest singular triplets (Eckart-Young). When sigma_r ties
/// sigma_{r+1} the first r triplets in the solver's order are kept and
/// `degenerate` is set. Symmetric input is decomposed as Q diag(lambda) Q^T
/// with sigma = |lambda| and V = Q sign(lambda); anything else goes to BDCSVD.
template <typename Derived>
TruncatedSvd<typename Derived::Scalar> truncated_svd(const Eigen::MatrixBase<Derived>& s,
                                                     Eigen::Index r) {
  using Scalar = typename Derived::Scalar;
  require(s.rows() == s.cols() && s.rows() >= 1, "truncate_rank: matrix must be square");
  require(r >= 1, "truncate_rank: rank must be positive");
  require(r <= s.rows(), "truncate_rank: rank exceeds matrix size");
  require(s.allFinite(), "truncate_rank: matrix must be finite");

  const MatrixX<Scalar> a = s.eval();
  const Eigen::Index n = a.rows();
  VectorX<Scalar> sigma(n);
  TruncatedSvd<Scalar> out;
  if (a == a.transpose()) {
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(a);
    if (eig.info() != Eigen::Success) throw NumericError("truncate_rank: eigensolver failed");
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = n - 1 - i;
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
      return std::abs(eig.eigenvalues()(x)) > std::abs(eig.eigenvalues()(y));
    });
    out.left.resize(n, r);
    out.right.resize(n, r);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index idx = order[static_cast<std::size_t>(k)];
      const Scalar lambda = eig.eigenvalues()(idx);
      sigma(k) = std::abs(lambda);
      if (k < r) {
        out.left.col(k) = eig.eigenvectors().col(idx);
        out.right.col(k) = lambda < Scalar(0) ? (-eig.eigenvectors().col(idx)).eval()
                                              : eig.eigenvectors().col(idx);
      }
    }
  } else {
    Eigen::BDCSVD<MatrixX<Scalar>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw NumericError("truncate_rank: SVD did not converge");
    sigma = svd.singularValues();
    out.left = svd.matrixU().leftCols(r);
    out.right = svd.matrixV().leftCols(r);
  }

  out.approximation = out.left * sigma.head(r).asDiagonal() * out.right.transpose();
  out.kept.assign(sigma.data(), sigma.data() + r);
  out.discarded_energy = sigma.tail(n - r).squaredNorm();
  if (r < n) out.degenerate = detail::tied(sigma(r - 1), sigma(r), sigma(0));
  if (!out.approximation.allFinite()) throw NumericError("truncate_rank: non-finite result");
  return out;
}

template <typename Derived>
MatrixX<typename Derived::Scalar> truncate_rank(const Eigen::MatrixBase<Derived>& s,
                                                Eigen::Index r) {
  return truncated_svd(s, r).approximation;
}

/// (M + M^T) / 2.
template <typename Derived>
MatrixX<typename Derived::Scalar> symmetrize(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  require(m.rows() == m.cols(), "symmetrize: matrix must be square");
  MatrixX<Scalar> out = (m + m.transpose()) * Scalar(0.5);
  return out;
}

/// S = Y / p, the unbiased estimator of D with a zero guess for missing entries.
Eigen::MatrixXd unbiased_estimate(const Observation& obs);

/// d_hat = symmetrize(truncate_rank(Y / p, r)). Negative entries are kept.
CompletionResult<double> svd_reconstruct(const Observation& obs, Eigen::Index r);

/// Rank an EDM of points in R^d can have.
constexpr Eigen::Index default_rank(Eigen::Index ambient_dim) { return ambient_dim + 2; }

/// Rank fixed by the original SVD-Reconstruct formulation.
inline constexpr Eigen::Index kClassicSvdReconstructRank = 4;

}  // namespace svdmds
