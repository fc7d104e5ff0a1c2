#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace svdmds {

/// Random delta-packing of zero-diagonal symmetric matrices of rank <= r.
struct PackingSet {
  std::vector<Eigen::MatrixXd> matrices;
  Eigen::Index n = 0;
  Eigen::Index r = 0;
  double delta = 0;
  std::uint64_t seed = 0;
  std::uint64_t cardinality = 0;  // floor(exp(r n / 128)), even when fewer were sampled
  double scale_used = 0;          // closed-form delta / |D~|_F
  std::vector<double> raw_norms;  // |D~^l|_F before rescaling
};

struct PackingVerification {
  bool success = false;
  bool norms_ok = false;
  double min_pairwise = 0;  // +infinity when there are no pairs
};

/// Largest accepted cardinality before `sample_m` is required.
inline constexpr std::uint64_t kMaxPackingSize = 1'000'000;

/// floor(exp(r n / 128)), exact near integer boundaries. Requires n >= 10 and
/// 2 <= r <= n. Saturates at UINT64_MAX.
std::uint64_t packing_cardinality(Eigen::Index n, Eigen::Index r);

/// sqrt(2 k n - k (k + 1)) with k = floor(r / 2): the Frobenius norm of every
/// unscaled sign matrix. Equals sqrt(r (n - r/4 - 1/2)) for even r and
/// sqrt((r-1)(n - (r-1)/4 - 1/2)) for odd r.
double packing_raw_norm(Eigen::Index n, Eigen::Index r);

/// Draws each matrix independently: i.i.d. signs on rows 1..floor(r/2),
/// columns i+1..n, mirrored below the diagonal, zeros elsewhere. Each matrix
/// is divided by its own computed norm and multiplied by delta.
/// `sample_m` draws that many matrices instead of the full cardinality.
PackingSet generate_packing(Eigen::Index n, Eigen::Index r, double delta, std::uint64_t seed,
                            std::optional<std::uint64_t> sample_m = std::nullopt);

/// Checks |D^l|_F = delta (within 1e-10) and min_{k != l} |D^k - D^l|_F >= delta.
PackingVerification verify_packing(const PackingSet& ps);

}  // namespace svdmds
