#pragma once

#include "svdmds/sampling.hpp"
#include "svdmds/svd_reconstruct.hpp"

namespace svdmds {

/// Settings of the trimming + spectral + refinement completion routine.
struct OptSpaceConfig {
  Eigen::Index r = 5;
  int max_iters = 100;
  double tol = 1e-6;  // stop when the relative objective decrease falls below this
  bool trim = true;
  // Proximal weight per sweep is damping * RMS observed residual. 0 gives
  // plain alternating least squares.
  double damping = 20.0;

  void validate() const;
};

/// Completion in the style of OptSpace:
///  1. optional trimming of rows/columns observed more than twice the mean count,
///  2. spectral start from the rank-r truncation of the rescaled trimmed matrix,
///  3. refinement of sum_{observed (i,j)} (Y_ij - (U V^T)_ij)^2 over n x r
///     factors by proximal alternating least squares,
///  4. d_hat = symmetrized U V^T.
/// The observed-entry objective is non-increasing across sweeps; its values
/// are stored in objective_history (entry 0 is the spectral start).
/// Flags: trimmed, ridge_regularized, max_iters_reached, objective_increase.
CompletionResult<double> optspace_complete(const Observation& obs, const OptSpaceConfig& cfg);

}  // namespace svdmds
