#include "svdmds/sampling.hpp"

#include <utility>

namespace svdmds {

namespace {

bool exactly_symmetric(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

}  // namespace

MaskMatrix::MaskMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  require(entries_.rows() == entries_.cols() && entries_.rows() >= 1,
          "MaskMatrix: must be square and nonempty");
  require((entries_.array() == 0.0 || entries_.array() == 1.0).all(),
          "MaskMatrix: entries must be 0 or 1");
  require(exactly_symmetric(entries_), "MaskMatrix: must be symmetric");
}

std::int64_t MaskMatrix::upper_count() const {
  return static_cast<std::int64_t>(entries_.triangularView<Eigen::Upper>().toDenseMatrix().sum());
}

NoiseMatrix::NoiseMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  require(entries_.rows() == entries_.cols(), "NoiseMatrix: must be square");
  require(entries_.allFinite(), "NoiseMatrix: entries must be finite");
  require(exactly_symmetric(entries_), "NoiseMatrix: must be symmetric");
}

Observation::Observation(Eigen::MatrixXd y, MaskMatrix mask, double p, double nu, SeedSpec seed)
    : y_(std::move(y)), mask_(std::move(mask)), p_(p), nu_(nu), seed_(seed) {
  require(p_ > 0.0 && p_ <= 1.0, "Observation: p must lie in (0, 1]");
  require(nu_ >= 0.0 && std::isfinite(nu_), "Observation: nu must be finite and nonnegative");
  require(y_.rows() == mask_.size() && y_.cols() == mask_.size(),
          "Observation: y and mask shapes differ");
  require(y_.allFinite(), "Observation: y must be finite");
  require(exactly_symmetric(y_), "Observation: y must be symmetric");
  require((mask_.matrix().array() != 0.0 || y_.array() == 0.0).all(),
          "Observation: y must be zero wherever the mask is zero");
}

MaskMatrix sample_mask(Eigen::Index n, double p, const SeedSpec& seed) {
  require(n >= 1, "sample_mask: n must be positive");
  require(p > 0.0 && p <= 1.0, "sample_mask: p must lie in (0, 1]");
  Rng rng(seed, StreamTag::kMask);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double bit = rng.bernoulli(p) ? 1.0 : 0.0;
      m(i, j) = bit;
      m(j, i) = bit;
    }
  }
  return MaskMatrix(std::move(m));
}

NoiseMatrix sample_noise(Eigen::Index n, double nu, const SeedSpec& seed) {
  require(n >= 1, "sample_noise: n must be positive");
  require(nu >= 0.0 && std::isfinite(nu), "sample_noise: nu must be finite and nonnegative");
  Rng rng(seed, StreamTag::kNoise);
  Eigen::MatrixXd e(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      // Draw even when nu == 0 so the stream position never depends on nu.
      const double v = nu * rng.normal();
      e(i, j) = v;
      e(j, i) = v;
    }
  }
  return NoiseMatrix(std::move(e));
}

Observation observe(const Edm<double>& d, double p, double nu, const SeedSpec& seed) {
  const Eigen::Index n = d.size();
  MaskMatrix mask = sample_mask(n, p, seed);
  const NoiseMatrix noise = sample_noise(n, nu, seed);
  Eigen::MatrixXd y = mask.matrix().cwiseProduct(d.matrix() + noise.matrix());
  return Observation(std::move(y), std::move(mask), p, nu, seed);
}

double estimate_p(const MaskMatrix& mask) {
  const double n = static_cast<double>(mask.size());
  return static_cast<double>(mask.upper_count()) / (n * (n + 1.0) / 2.0);
}

PointCloud<double> sample_uniform_cloud(Eigen::Index d, Eigen::Index n, double lo, double hi,
                                        const SeedSpec& seed) {
  require(d >= 1 && n >= 1, "sample_uniform_cloud: d and n must be positive");
  require(lo < hi, "sample_uniform_cloud: need lo < hi");
  Rng rng(seed, StreamTag::kCloud);
  Eigen::MatrixXd x(d, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < d; ++i) x(i, j) = rng.uniform(lo, hi);
  return PointCloud<double>(std::move(x));
}

}  // namespace svdmds
