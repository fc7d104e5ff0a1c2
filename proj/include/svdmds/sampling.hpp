#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>

#include "svdmds/edm.hpp"

namespace svdmds {

/// Identifies one reproducible random stream family: the experiment-wide
/// master seed plus the index of the trial.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Distinguishes independent sub-streams derived from one SeedSpec.
enum class StreamTag : std::uint64_t {
  kMask = 1,
  kNoise = 2,
  kCloud = 3,
  kPacking = 4,
  kGeneric = 5,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of the (seed, tag) sub-stream; a pure function of its inputs.
constexpr std::uint64_t derive_stream_seed(const SeedSpec& seed, StreamTag tag) noexcept {
  std::uint64_t h = mix64(seed.master_seed);
  h = mix64(h ^ seed.trial_index);
  h = mix64(h ^ static_cast<std::uint64_t>(tag));
  return h;
}

/// Portable random source: std::mt19937_64 (whose output sequence is fixed by
/// the standard) with hand-written transforms, so draws are bit-identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(const SeedSpec& seed, StreamTag tag) : engine_(derive_stream_seed(seed, tag)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Rademacher draw, +1 or -1 with equal probability.
  double sign() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

  /// Standard normal via the Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Symmetric {0,1} observation mask.
class MaskMatrix {
 public:
  /// Validates entries in {0,1} and exact symmetry.
  explicit MaskMatrix(Eigen::MatrixXd entries);

  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }
  Eigen::Index size() const noexcept { return entries_.rows(); }
  /// Ones on or above the diagonal.
  std::int64_t upper_count() const;

 private:
  Eigen::MatrixXd entries_;
};

/// Symmetric Gaussian measurement noise.
class NoiseMatrix {
 public:
  explicit NoiseMatrix(Eigen::MatrixXd entries);

  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }
  Eigen::Index size() const noexcept { return entries_.rows(); }

 private:
  Eigen::MatrixXd entries_;
};

/// Y = mask .* (D + E) together with the model parameters that produced it.
class Observation {
 public:
  /// Validates shapes, symmetry of y, y == 0 off the mask, p in (0,1], nu >= 0.
  Observation(Eigen::MatrixXd y, MaskMatrix mask, double p, double nu, SeedSpec seed = {});

  const Eigen::MatrixXd& y() const noexcept { return y_; }
  const MaskMatrix& mask() const noexcept { return mask_; }
  double p() const noexcept { return p_; }
  double nu() const noexcept { return nu_; }
  const SeedSpec& seed() const noexcept { return seed_; }
  Eigen::Index size() const noexcept { return y_.rows(); }

 private:
  Eigen::MatrixXd y_;
  MaskMatrix mask_;
  double p_;
  double nu_;
  SeedSpec seed_;
};

/// Upper triangle (diagonal included) is i.i.d. Bernoulli(p), mirrored below.
MaskMatrix sample_mask(Eigen::Index n, double p, const SeedSpec& seed);

/// Upper triangle (diagonal included) is i.i.d. N(0, nu^2), mirrored below.
NoiseMatrix sample_noise(Eigen::Index n, double nu, const SeedSpec& seed);

/// Draws mask and noise from decorrelated sub-streams of `seed`. The diagonal
/// is masked and perturbed like every other i <= j entry.
Observation observe(const Edm<double>& d, double p, double nu, const SeedSpec& seed);

/// Ones on or above the diagonal divided by n(n+1)/2. Never used implicitly.
double estimate_p(const MaskMatrix& mask);

/// d x n cloud with every coordinate uniform on [lo, hi).
PointCloud<double> sample_uniform_cloud(Eigen::Index d, Eigen::Index n, double lo, double hi,
                                        const SeedSpec& seed);

}  // namespace svdmds
