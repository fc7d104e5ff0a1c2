#pragma once

#include <Eigen/Dense>

#include <vector>

#include "svdmds/edm.hpp"
#include "svdmds/errors.hpp"

namespace svdmds {

template <typename Scalar = double>
struct MdsResult {
  MatrixX<Scalar> x_hat;                 // d x n, centered columns
  std::vector<Scalar> eigenvalues_used;  // descending, after clamping
  Scalar negative_mass = Scalar(0);      // total magnitude clamped to zero
};

/// Classic MDS. The top-d eigenvalues of -1/2 J D J are chosen by algebraic
/// value; negatives among them are clamped to zero and reported in
/// negative_mass. Returns diag(sqrt(lambda)) Q_d^T.
template <typename Derived>
MdsResult<typename Derived::Scalar> classic_mds(const Eigen::MatrixBase<Derived>& d_hat,
                                                Eigen::Index d) {
  using Scalar = typename Derived::Scalar;
  require(d_hat.rows() == d_hat.cols(), "classic_mds: matrix must be square");
  require(d >= 1, "classic_mds: dimension must be positive");
  require(d < d_hat.rows(), "classic_mds: dimension must be smaller than the node count");
  require(d_hat.allFinite(), "classic_mds: matrix must be finite");

  const Eigen::Index n = d_hat.rows();
  const MatrixX<Scalar> gram = gram_from_edm(d_hat);
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(gram);
  if (eig.info() != Eigen::Success) throw NumericError("classic_mds: eigensolver failed");

  // Eigen sorts ascending; the top-d block is the trailing one, reversed.
  MdsResult<Scalar> out;
  out.x_hat.resize(d, n);
  out.eigenvalues_used.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    const Eigen::Index idx = n - 1 - k;
    Scalar lambda = eig.eigenvalues()(idx);
    if (lambda < Scalar(0)) {
      out.negative_mass += -lambda;
      lambda = Scalar(0);
    }
    out.eigenvalues_used.push_back(lambda);
    out.x_hat.row(k) = std::sqrt(lambda) * eig.eigenvectors().col(idx).transpose();
  }
  return out;
}

/// Orthogonal Procrustes plus translation: maps x_hat onto x. Reflections are
/// allowed. For visual comparison only; dist_metric needs no alignment.
template <typename DerivedA, typename DerivedB>
MatrixX<typename DerivedA::Scalar> align_rigid(const Eigen::MatrixBase<DerivedA>& x,
                                               const Eigen::MatrixBase<DerivedB>& x_hat) {
  using Scalar = typename DerivedA::Scalar;
  require(x.rows() == x_hat.rows() && x.cols() == x_hat.cols(),
          "align_rigid: shape mismatch");
  require(x.cols() >= 1, "align_rigid: empty input");

  const VectorX<Scalar> centroid = x.rowwise().mean();
  const MatrixX<Scalar> target = x.colwise() - centroid;
  const MatrixX<Scalar> source = x_hat.colwise() - x_hat.rowwise().mean();

  const MatrixX<Scalar> cross = target * source.transpose();
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const MatrixX<Scalar> rotation = svd.matrixU() * svd.matrixV().transpose();

  MatrixX<Scalar> aligned = rotation * source;
  aligned.colwise() += centroid;
  return aligned;
}

}  // namespace svdmds
