#include <doctest.h>

#include <cmath>
#include <set>

#include "svdmds/sampling.hpp"

using namespace svdmds;

namespace {

Edm<double> small_edm(std::uint64_t seed, Eigen::Index n = 12) {
  return edm_from_points(sample_uniform_cloud(3, n, -1, 1, SeedSpec{seed, 0}));
}

}  // namespace

TEST_CASE("stream seeds are pure and distinct") {
  const SeedSpec a{42, 0};
  CHECK(derive_stream_seed(a, StreamTag::kMask) == derive_stream_seed(a, StreamTag::kMask));
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    seen.insert(derive_stream_seed(SeedSpec{42, t}, StreamTag::kMask));
    seen.insert(derive_stream_seed(SeedSpec{42, t}, StreamTag::kNoise));
  }
  CHECK(seen.size() == 2000);
  CHECK(derive_stream_seed(SeedSpec{1, 0}, StreamTag::kMask) !=
        derive_stream_seed(SeedSpec{2, 0}, StreamTag::kMask));
}

TEST_CASE("mix64 matches the SplitMix64 reference output") {
  // First outputs of SplitMix64 seeded with 0: state advances by the golden
  // gamma before each finalization.
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(mix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("Rng transforms") {
  Rng rng(123);
  double lo = 1, hi = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);

  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());

  int plus = 0;
  Rng s(9);
  for (int i = 0; i < 10000; ++i) plus += s.sign() > 0;
  CHECK(plus > 4700);
  CHECK(plus < 5300);
}

TEST_CASE("sample_mask") {
  const auto full = sample_mask(30, 1.0, SeedSpec{1, 0});
  CHECK(full.matrix() == Eigen::MatrixXd::Ones(30, 30));

  const Eigen::Index n = 200;
  const auto half = sample_mask(n, 0.5, SeedSpec{2, 0});
  const double frac = double(half.upper_count()) / double(n * (n + 1) / 2);
  CHECK(frac >= 0.45);
  CHECK(frac <= 0.55);
  CHECK(half.matrix() == half.matrix().transpose());

  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto m = sample_mask(25, 0.3, SeedSpec{s, 3});
    CHECK(m.matrix() == m.matrix().transpose());
  }

  CHECK(sample_mask(10, 0.4, SeedSpec{8, 2}).matrix() ==
        sample_mask(10, 0.4, SeedSpec{8, 2}).matrix());

  CHECK_THROWS_AS(sample_mask(10, 0.0, SeedSpec{}), std::invalid_argument);
  CHECK_THROWS_AS(sample_mask(10, 1.5, SeedSpec{}), std::invalid_argument);
  CHECK_THROWS_AS(sample_mask(0, 0.5, SeedSpec{}), std::invalid_argument);
}

TEST_CASE("sample_noise") {
  CHECK(sample_noise(20, 0.0, SeedSpec{1, 0}).matrix().isZero(0));

  const Eigen::Index n = 200;
  const auto e = sample_noise(n, 1.0, SeedSpec{3, 0}).matrix();
  CHECK(e == e.transpose());
  double sum = 0, sq = 0;
  std::size_t count = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      sum += e(i, j);
      ++count;
    }
  const double mean = sum / double(count);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) sq += (e(i, j) - mean) * (e(i, j) - mean);
  const double var = sq / double(count - 1);
  CHECK(std::abs(mean) <= 0.02);
  CHECK(std::abs(var - 1.0) <= 0.05);

  CHECK_THROWS_AS(sample_noise(5, -0.1, SeedSpec{}), std::invalid_argument);
}

TEST_CASE("observe") {
  const auto d = small_edm(4);
  const auto full = observe(d, 1.0, 0.0, SeedSpec{5, 0});
  CHECK(full.y() == d.matrix());

  const auto masked = observe(d, 0.5, 0.0, SeedSpec{6, 0});
  for (Eigen::Index i = 0; i < d.size(); ++i)
    for (Eigen::Index j = 0; j < d.size(); ++j)
      if (masked.y()(i, j) != 0) CHECK(masked.y()(i, j) == d.matrix()(i, j));

  const auto a = observe(d, 0.5, 0.3, SeedSpec{7, 1});
  const auto b = observe(d, 0.5, 0.3, SeedSpec{7, 1});
  CHECK(a.y() == b.y());
  CHECK(a.mask().matrix() == b.mask().matrix());
}

TEST_CASE("observe equals mask .* (D + E) regenerated from the same seed") {
  const auto d = small_edm(9, 15);
  const SeedSpec seed{11, 4};
  const auto obs = observe(d, 0.6, 0.7, seed);
  const auto mask = sample_mask(15, 0.6, seed).matrix();
  const auto noise = sample_noise(15, 0.7, seed).matrix();
  const Eigen::MatrixXd expected = mask.cwiseProduct(d.matrix() + noise);
  CHECK(obs.y() == expected);
  CHECK(obs.y() == obs.y().transpose());
  // The diagonal is masked and perturbed like any other entry.
  bool diagonal_noise = false;
  for (Eigen::Index i = 0; i < 15; ++i) diagonal_noise |= obs.y()(i, i) != 0;
  CHECK(diagonal_noise);
}

TEST_CASE("Observation validation") {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(3, 3);
  MaskMatrix mask(Eigen::MatrixXd::Ones(3, 3));
  CHECK_NOTHROW(Observation(y, mask, 0.5, 0.0));
  CHECK_THROWS_AS(Observation(y, mask, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Observation(y, mask, 0.5, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(Observation(Eigen::MatrixXd::Zero(2, 2), mask, 0.5, 0.0),
                  std::invalid_argument);

  Eigen::MatrixXd asym = y;
  asym(0, 1) = 1;
  CHECK_THROWS_AS(Observation(asym, mask, 0.5, 0.0), std::invalid_argument);

  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(3, 3);
  m(0, 1) = m(1, 0) = 0;
  Eigen::MatrixXd off = y;
  off(0, 1) = off(1, 0) = 2;
  CHECK_THROWS_AS(Observation(off, MaskMatrix(m), 0.5, 0.0), std::invalid_argument);

  Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(2, 2);
  bad(0, 0) = 0.5;
  CHECK_THROWS_AS(MaskMatrix{bad}, std::invalid_argument);
  Eigen::MatrixXd asym_mask = Eigen::MatrixXd::Ones(2, 2);
  asym_mask(0, 1) = 0;
  CHECK_THROWS_AS(MaskMatrix{asym_mask}, std::invalid_argument);
  Eigen::MatrixXd asym_noise = Eigen::MatrixXd::Zero(2, 2);
  asym_noise(1, 0) = 1;
  CHECK_THROWS_AS(NoiseMatrix{asym_noise}, std::invalid_argument);
}

TEST_CASE("estimate_p counts the upper triangle") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m(0, 0) = 1;
  m(0, 2) = m(2, 0) = 1;
  CHECK(estimate_p(MaskMatrix(m)) == doctest::Approx(2.0 / 6.0));
}

TEST_CASE("sample_uniform_cloud") {
  const auto c = sample_uniform_cloud(3, 100, -1, 1, SeedSpec{1, 2});
  CHECK(c.dim() == 3);
  CHECK(c.size() == 100);
  CHECK(c.coords().minCoeff() >= -1);
  CHECK(c.coords().maxCoeff() < 1);
  CHECK(c.coords() == sample_uniform_cloud(3, 100, -1, 1, SeedSpec{1, 2}).coords());
  CHECK_THROWS_AS(sample_uniform_cloud(3, 10, 1, -1, SeedSpec{}), std::invalid_argument);
}
