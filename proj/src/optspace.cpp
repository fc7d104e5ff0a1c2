#include "svdmds/optspace.hpp"

#include <algorithm>
#include <functional>

#include <cmath>
#include <string>
#include <vector>

namespace svdmds {

void OptSpaceConfig::validate() const {
  require(r >= 1, "OptSpaceConfig: r must be positive");
  require(max_iters >= 1, "OptSpaceConfig: max_iters must be at least 1");
  require(tol > 0 && std::isfinite(tol), "OptSpaceConfig: tol must be positive");
  require(damping >= 0 && std::isfinite(damping), "OptSpaceConfig: damping must be nonnegative");
}

namespace {

using Index = Eigen::Index;
using Support = std::vector<std::vector<Index>>;

double observed_objective(const Eigen::MatrixXd& y, const Support& support,
                          const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
  double total = 0.0;
  for (Index i = 0; i < y.rows(); ++i) {
    for (Index j : support[static_cast<std::size_t>(i)]) {
      const double residual = y(i, j) - u.row(i).dot(v.row(j));
      total += residual * residual;
    }
  }
  return total;
}

// Row-wise proximal least squares:
//   a_i <- argmin sum_{j in support(i)} (y_ij - a . b_j)^2 + lambda |a - a_i|^2.
// The mask is symmetric, so the same support serves both factors.
bool update_factor(Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& y,
                   const Support& support, double lambda) {
  const Index r = a.cols();
  bool regularized = false;
  Eigen::MatrixXd gram(r, r);
  Eigen::VectorXd rhs(r);
  for (Index i = 0; i < a.rows(); ++i) {
    const auto& cols = support[static_cast<std::size_t>(i)];
    if (cols.empty()) continue;
    gram.setZero();
    rhs.setZero();
    for (Index j : cols) {
      gram.selfadjointView<Eigen::Lower>().rankUpdate(b.row(j).transpose());
      rhs.noalias() += y(i, j) * b.row(j).transpose();
    }
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    double weight = lambda;
    gram.diagonal().array() += weight;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success || llt.rcond() < 1e-12) {
      const double ridge = 1e-10 * (gram.trace() / static_cast<double>(r) + 1.0);
      gram.diagonal().array() += ridge;
      weight += ridge;
      llt.compute(gram);
      regularized = true;
      if (llt.info() != Eigen::Success) throw NumericError("optspace: singular normal equations");
    }
    rhs.noalias() += weight * a.row(i).transpose();
    a.row(i) = llt.solve(rhs).transpose();
  }
  return regularized;
}

}  // namespace

CompletionResult<double> optspace_complete(const Observation& obs, const OptSpaceConfig& cfg) {
  cfg.validate();
  const Index n = obs.size();
  require(cfg.r <= n, "optspace: rank exceeds matrix size");

  CompletionResult<double> out;
  out.rank = cfg.r;
  out.converged = false;

  Eigen::MatrixXd mask = obs.mask().matrix();
  Eigen::MatrixXd y = obs.y();

  if (cfg.trim) {
    const Eigen::VectorXd counts = mask.rowwise().sum();
    const double limit = 2.0 * counts.mean();
    int trimmed = 0;
    for (Index i = 0; i < n; ++i) {
      if (counts(i) > limit) {
        mask.row(i).setZero();
        mask.col(i).setZero();
        ++trimmed;
      }
    }
    if (trimmed > 0) {
      y = y.cwiseProduct(mask);
      out.flags.push_back("trimmed:" + std::to_string(trimmed));
    }
  }

  auto start = truncated_svd(y / obs.p(), cfg.r);
  Eigen::VectorXd root(cfg.r);
  for (Index k = 0; k < cfg.r; ++k) root(k) = std::sqrt(start.kept[static_cast<std::size_t>(k)]);
  Eigen::MatrixXd u = start.left * root.asDiagonal();
  Eigen::MatrixXd v = start.right * root.asDiagonal();

  Support support(static_cast<std::size_t>(n));
  double observed = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (mask(i, j) != 0.0) {
        support[static_cast<std::size_t>(i)].push_back(j);
        observed += 1.0;
      }

  double objective = observed_objective(y, support, u, v);
  out.objective_history.push_back(objective);
  const double slack = 1e-12 * y.squaredNorm();
  bool regularized = false;
  bool increased = false;

  if (observed == 0.0 || objective == 0.0) {
    out.converged = true;
  } else {
    for (int it = 1; it <= cfg.max_iters; ++it) {
      const double lambda = cfg.damping * std::sqrt(objective / observed);
      regularized |= update_factor(u, v, y, support, lambda);
      regularized |= update_factor(v, u, y, support, lambda);
      const double next = observed_objective(y, support, u, v);
      if (!std::isfinite(next)) throw NumericError("optspace: objective became non-finite");
      if (next > objective + slack) increased = true;
      out.objective_history.push_back(next);
      out.iterations = it;
      const bool stalled = (objective - next) < cfg.tol * objective;
      objective = next;
      if (next == 0.0 || stalled) {
        out.converged = true;
        break;
      }
    }
  }

  if (regularized) out.flags.emplace_back("ridge_regularized");
  if (increased) out.flags.emplace_back("objective_increase");
  if (!out.converged) out.flags.emplace_back("max_iters_reached");

  out.d_hat = symmetrize(u * v.transpose());
  if (!out.d_hat.allFinite()) throw NumericError("optspace: non-finite estimate");
  Eigen::VectorXd sigma = singular_values(out.d_hat);
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  out.kept_singular_values.assign(sigma.data(), sigma.data() + cfg.r);
  out.discarded_energy = sigma.tail(n - cfg.r).squaredNorm();
  if (cfg.r < n)
    out.degenerate_spectrum = detail::tied(sigma(cfg.r - 1), sigma(cfg.r), sigma(0));
  return out;
}

}  // namespace svdmds
