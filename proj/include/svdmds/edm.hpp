#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <utility>

#include "svdmds/errors.hpp"

namespace svdmds {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Relative singular-value threshold behind every numerical-rank decision.
inline constexpr double kRankTolerance = 1e-9;

/// Node coordinates stored d x n, one node per column.
template <typename Scalar = double>
class PointCloud {
 public:
  using Matrix = MatrixX<Scalar>;

  explicit PointCloud(Matrix coords) : coords_(std::move(coords)) {
    require(coords_.rows() >= 1 && coords_.cols() >= 1,
            "PointCloud: need at least one dimension and one node");
    require(coords_.allFinite(), "PointCloud: coordinates must be finite");
  }

  const Matrix& coords() const noexcept { return coords_; }
  Eigen::Index dim() const noexcept { return coords_.rows(); }
  Eigen::Index size() const noexcept { return coords_.cols(); }

 private:
  Matrix coords_;
};

template <typename Scalar>
class Edm;

template <typename Scalar>
Edm<Scalar> edm_from_points(const PointCloud<Scalar>& points);

/// Matrix of squared pairwise distances. Construction from a raw matrix
/// validates exact symmetry, a zero diagonal and nonnegative entries.
template <typename Scalar = double>
class Edm {
 public:
  using Matrix = MatrixX<Scalar>;

  explicit Edm(Matrix entries) : entries_(std::move(entries)) {
    require(entries_.rows() == entries_.cols() && entries_.rows() >= 1,
            "Edm: matrix must be square and nonempty");
    require(entries_.allFinite(), "Edm: entries must be finite");
    const Eigen::Index n = entries_.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
      require(entries_(j, j) == Scalar(0), "Edm: diagonal must be zero");
      for (Eigen::Index i = 0; i < j; ++i) {
        require(entries_(i, j) == entries_(j, i), "Edm: matrix must be symmetric");
        require(entries_(i, j) >= Scalar(0), "Edm: entries must be nonnegative");
      }
    }
  }

  const Matrix& matrix() const noexcept { return entries_; }
  Eigen::Index size() const noexcept { return entries_.rows(); }
  Scalar max_entry() const { return entries_.maxCoeff(); }

 private:
  struct Trusted {};
  Edm(Matrix entries, Trusted) : entries_(std::move(entries)) {}
  friend Edm edm_from_points<Scalar>(const PointCloud<Scalar>&);

  Matrix entries_;
};

/// D_ij = |x_i - x_j|^2. Each pair is computed once and mirrored.
template <typename Scalar>
Edm<Scalar> edm_from_points(const PointCloud<Scalar>& points) {
  const auto& x = points.coords();
  const Eigen::Index n = x.cols();
  MatrixX<Scalar> d = MatrixX<Scalar>::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const Scalar s = (x.col(i) - x.col(j)).squaredNorm();
      d(i, j) = s;
      d(j, i) = s;
    }
  }
  return Edm<Scalar>(std::move(d), typename Edm<Scalar>::Trusted{});
}

/// The geometric centering matrix J = I - (1/n) 1 1^T, kept implicit.
/// Products with J are done by subtracting means, O(n^2) instead of O(n^3).
class CenteringMatrix {
 public:
  explicit CenteringMatrix(Eigen::Index n) : n_(n) {
    require(n >= 1, "centering_matrix: n must be positive");
  }

  Eigen::Index size() const noexcept { return n_; }

  template <typename Scalar = double>
  MatrixX<Scalar> dense() const {
    MatrixX<Scalar> j = MatrixX<Scalar>::Constant(n_, n_, -Scalar(1) / Scalar(n_));
    j.diagonal().array() += Scalar(1);
    return j;
  }

  /// J * M * J.
  template <typename Derived>
  MatrixX<typename Derived::Scalar> double_center(const Eigen::MatrixBase<Derived>& m) const {
    using Scalar = typename Derived::Scalar;
    require(m.rows() == n_ && m.cols() == n_, "double_center: shape mismatch");
    const VectorX<Scalar> row_means = m.rowwise().mean();
    const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> col_means = m.colwise().mean();
    const Scalar grand = row_means.mean();
    MatrixX<Scalar> out = m;
    out.colwise() -= row_means;
    out.rowwise() -= col_means;
    out.array() += grand;
    return out;
  }

  /// M * J for a matrix with n columns: removes each row's mean. Applied to a
  /// d x n coordinate matrix this translates the centroid to the origin.
  template <typename Derived>
  MatrixX<typename Derived::Scalar> right_apply(const Eigen::MatrixBase<Derived>& m) const {
    require(m.cols() == n_, "right_apply: column count mismatch");
    MatrixX<typename Derived::Scalar> out = m;
    out.colwise() -= out.rowwise().mean();
    return out;
  }

 private:
  Eigen::Index n_;
};

inline CenteringMatrix centering_matrix(Eigen::Index n) { return CenteringMatrix(n); }

/// -1/2 J D J, symmetrized after the product.
template <typename Derived>
MatrixX<typename Derived::Scalar> gram_from_edm(const Eigen::MatrixBase<Derived>& d) {
  using Scalar = typename Derived::Scalar;
  require(d.rows() == d.cols() && d.rows() >= 1, "gram_from_edm: matrix must be square");
  MatrixX<Scalar> g = CenteringMatrix(d.rows()).double_center(d) * Scalar(-0.5);
  MatrixX<Scalar> sym = (g + g.transpose()) * Scalar(0.5);
  return sym;
}

template <typename Scalar>
MatrixX<Scalar> gram_from_edm(const Edm<Scalar>& d) {
  return gram_from_edm(d.matrix());
}

/// Singular values in no particular order. Symmetric input goes through the
/// symmetric eigensolver (sigma = |lambda|); Eigen 3.4.0's BDCSVD can index
/// out of bounds on exactly structured matrices such as packing members.
template <typename Derived>
VectorX<typename Derived::Scalar> singular_values(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const MatrixX<Scalar> a = m.eval();
  if (a.rows() == a.cols() && a == a.transpose()) {
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(a, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw NumericError("singular_values: eigensolver failed");
    return eig.eigenvalues().cwiseAbs();
  }
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(a);
  if (svd.info() != Eigen::Success) throw NumericError("singular_values: SVD did not converge");
  return svd.singularValues();
}

/// Number of singular values above rel_tol * sigma_max.
template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived>& m, double rel_tol = kRankTolerance) {
  using Scalar = typename Derived::Scalar;
  if (m.size() == 0) return 0;
  const VectorX<Scalar> s = singular_values(m);
  const Scalar top = s.maxCoeff();
  if (top == Scalar(0)) return 0;
  return (s.array() > Scalar(rel_tol) * top).count();
}

}  // namespace svdmds
