#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "svdmds/edm.hpp"
#include "svdmds/errors.hpp"

namespace svdmds {

/// (1/n) |d_hat - d_true|_F, i.e. the root-mean-square entry error.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar per_entry_error(const Eigen::MatrixBase<DerivedA>& d_hat,
                                          const Eigen::MatrixBase<DerivedB>& d_true) {
  using Scalar = typename DerivedA::Scalar;
  require(d_hat.rows() == d_true.rows() && d_hat.cols() == d_true.cols(),
          "per_entry_error: shape mismatch");
  require(d_hat.rows() >= 1, "per_entry_error: empty input");
  return (d_hat - d_true).norm() / Scalar(d_hat.rows());
}

/// Centered Gram X^T X of a d x n coordinate matrix after removing its centroid.
template <typename Derived>
MatrixX<typename Derived::Scalar> centered_gram(const Eigen::MatrixBase<Derived>& x) {
  const MatrixX<typename Derived::Scalar> xc = CenteringMatrix(x.cols()).right_apply(x);
  return xc.transpose() * xc;
}

/// (1/n) |J X^T X J - J Xh^T Xh J|_F. Invariant under rigid motions of either
/// argument; the row counts of x and x_hat may differ.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dist_metric(const Eigen::MatrixBase<DerivedA>& x,
                                      const Eigen::MatrixBase<DerivedB>& x_hat) {
  using Scalar = typename DerivedA::Scalar;
  require(x.cols() == x_hat.cols(), "dist_metric: node counts differ");
  require(x.cols() >= 1, "dist_metric: empty input");
  return (centered_gram(x) - centered_gram(x_hat)).norm() / Scalar(x.cols());
}

/// Plug-in parameters of the closed-form error bounds. `m` is the expected
/// number of observed entries (p n^2) and `zeta` bounds every EDM entry.
/// `c_const` stands in for the unspecified absolute constant.
struct BoundParams {
  double n = 0;
  double m = 0;
  double r = 0;
  double d = 0;
  double zeta = 0;
  double nu = 0;
  double c_const = 1;

  static BoundParams from_probability(double n, double p, double r, double d, double zeta,
                                      double nu, double c_const = 1.0) {
    return BoundParams{n, p * n * n, r, d, zeta, nu, c_const};
  }

  /// Throws when a parameter is out of its domain.
  void validate() const;
  /// Soft hypotheses of the bounds that are violated (m >= n log n,
  /// r n >= 512 log 2). Empty when all hold.
  std::vector<std::string> warnings() const;
};

/// zeta = max_ij D_ij, the tightest value the incoherence condition allows.
template <typename Scalar>
Scalar incoherence_bound(const Edm<Scalar>& d) {
  return d.max_entry();
}

/// Check zeta against an EDM in use.
template <typename Scalar>
void check_zeta(const BoundParams& bp, const Edm<Scalar>& d) {
  require(bp.zeta >= double(d.max_entry()), "BoundParams: zeta below max entry of D");
}

/// C sqrt(r n / m) (zeta + nu): per-entry completion error in expectation.
double expectation_bound(const BoundParams& bp);

/// n exp(-c min(m t^2 / (n^3 r s^2), m t / (n^2 sqrt(r) s))), s = zeta + nu.
/// Not clipped; see tail_probability.
double tail_bound(double t, const BoundParams& bp);

/// min(1, tail_bound(t, bp)).
double tail_probability(double t, const BoundParams& bp);

/// t where the two arguments of the min in tail_bound coincide: n sqrt(r) (zeta + nu).
double tail_branch_point(const BoundParams& bp);

/// C sqrt(d n / m) (zeta + nu): expected dist after MDS.
double coordinate_bound(const BoundParams& bp);

/// (n nu / 64) sqrt(r n / m). Bounds the total Frobenius error, not per entry.
double minimax_lower_bound(const BoundParams& bp);

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};

/// Ordinary least squares of y on x. Needs >= 3 points and non-constant x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Slope of log_y on log_x. log_x must be strictly increasing.
double fit_rate(std::span<const double> log_x, std::span<const double> log_y);

/// Spearman rank correlation (average ranks on ties).
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace svdmds
