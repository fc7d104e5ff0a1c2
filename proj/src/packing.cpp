#include "svdmds/packing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "svdmds/errors.hpp"
#include "svdmds/sampling.hpp"

namespace svdmds {

namespace {

void check_hypotheses(Eigen::Index n, Eigen::Index r) {
  require(n >= 10, "packing: requires n >= 10");
  require(r >= 2 && r <= n, "packing: requires 2 <= r <= n");
}

}  // namespace

std::uint64_t packing_cardinality(Eigen::Index n, Eigen::Index r) {
  check_hypotheses(n, r);
  const long double x = static_cast<long double>(r) * static_cast<long double>(n) / 128.0L;
  if (x >= 44.0L) return std::numeric_limits<std::uint64_t>::max();  // e^44 > 2^63
  auto k = static_cast<std::uint64_t>(std::floor(std::exp(x)));
  // floor(e^x) = k  <=>  log k <= x < log(k + 1); repair one-off rounding.
  while (k > 1 && std::log(static_cast<long double>(k)) > x) --k;
  while (std::log(static_cast<long double>(k + 1)) <= x) ++k;
  return k;
}

double packing_raw_norm(Eigen::Index n, Eigen::Index r) {
  check_hypotheses(n, r);
  const double k = static_cast<double>(r / 2);
  return std::sqrt(2.0 * k * static_cast<double>(n) - k * (k + 1.0));
}

PackingSet generate_packing(Eigen::Index n, Eigen::Index r, double delta, std::uint64_t seed,
                            std::optional<std::uint64_t> sample_m) {
  check_hypotheses(n, r);
  require(delta > 0 && std::isfinite(delta), "packing: delta must be positive");

  PackingSet ps;
  ps.n = n;
  ps.r = r;
  ps.delta = delta;
  ps.seed = seed;
  ps.cardinality = packing_cardinality(n, r);
  ps.scale_used = delta / packing_raw_norm(n, r);

  std::uint64_t count = ps.cardinality;
  if (sample_m) {
    require(*sample_m >= 1, "packing: sample_m must be positive");
    require(*sample_m <= kMaxPackingSize, "packing: sample_m too large");
    count = *sample_m;
  } else {
    require(count <= kMaxPackingSize,
            "packing: cardinality exceeds 1e6; pass sample_m to draw a subset");
  }

  const Eigen::Index half = r / 2;
  ps.matrices.reserve(count);
  ps.raw_norms.reserve(count);
  for (std::uint64_t l = 0; l < count; ++l) {
    Rng rng(SeedSpec{seed, l}, StreamTag::kPacking);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < half; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double s = rng.sign();
        m(i, j) = s;
        m(j, i) = s;
      }
    }
    const double raw = m.norm();
    ps.raw_norms.push_back(raw);
    m *= delta / raw;
    ps.matrices.push_back(std::move(m));
  }
  return ps;
}

PackingVerification verify_packing(const PackingSet& ps) {
  PackingVerification v;
  v.norms_ok = true;
  for (const auto& m : ps.matrices)
    if (std::abs(m.norm() - ps.delta) > 1e-10) v.norms_ok = false;

  v.min_pairwise = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < ps.matrices.size(); ++k)
    for (std::size_t l = k + 1; l < ps.matrices.size(); ++l)
      v.min_pairwise = std::min(v.min_pairwise, (ps.matrices[k] - ps.matrices[l]).norm());

  v.success = v.norms_ok && v.min_pairwise >= ps.delta;
  return v;
}

}  // namespace svdmds
