#include "svdmds/svd_reconstruct.hpp"

namespace svdmds {

Eigen::MatrixXd unbiased_estimate(const Observation& obs) {
  require(obs.p() > 0.0, "unbiased_estimate: p must be positive");
  Eigen::MatrixXd s = obs.y() / obs.p();
  if (!s.allFinite()) throw NumericError("unbiased_estimate: Y / p overflows");
  return s;
}

CompletionResult<double> svd_reconstruct(const Observation& obs, Eigen::Index r) {
  require(r >= 1 && r <= obs.size(), "svd_reconstruct: rank must lie in [1, n]");
  auto cut = truncated_svd(unbiased_estimate(obs), r);

  CompletionResult<double> out;
  out.d_hat = symmetrize(cut.approximation);
  out.kept_singular_values = std::move(cut.kept);
  out.discarded_energy = cut.discarded_energy;
  out.rank = r;
  out.degenerate_spectrum = cut.degenerate;
  if (out.degenerate_spectrum) out.flags.emplace_back("degenerate_spectrum");
  return out;
}

}  // namespace svdmds
