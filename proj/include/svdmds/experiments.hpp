#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "svdmds/optspace.hpp"
#include "svdmds/sampling.hpp"

namespace svdmds {

enum class Algorithm { kSvdReconstruct, kOptSpace };

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view name);

/// Declarative Monte Carlo sweep. Stored on disk in the flat key/value
/// dialect read by parse_config (see README).
struct ExperimentConfig {
  int schema_version = 1;
  Eigen::Index n = 50;
  Eigen::Index d = 3;
  double coord_lo = -1.0;  // every coordinate ~ Uniform(coord_lo, coord_hi)
  double coord_hi = 1.0;
  std::vector<double> p_grid{0.5};
  std::vector<double> nu_grid{0.5};
  Eigen::Index r = 5;
  std::vector<Algorithm> algorithms{Algorithm::kSvdReconstruct};
  int trials = 20;
  std::uint64_t master_seed = 0;
  std::string outputs = "results";
  bool fixed_cloud = false;       // one cloud for every trial instead of a fresh one
  bool record_wall_time = false;  // off keeps records.csv byte-reproducible
  int threads = 0;                // 0: hardware concurrency
  int optspace_max_iters = 100;
  double optspace_tol = 1e-6;
  bool optspace_trim = true;
  double optspace_damping = 20.0;

  void validate() const;
  OptSpaceConfig optspace() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

inline constexpr int kConfigSchemaVersion = 1;

ExperimentConfig parse_config(std::string_view text);
std::string serialize_config(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

/// 16 hex digits of FNV-1a over the serialized config.
std::string config_hash(const ExperimentConfig& cfg);

struct TrialRecord {
  Algorithm algorithm = Algorithm::kSvdReconstruct;
  std::uint64_t trial = 0;
  double p = 0;
  double nu = 0;
  double per_entry_error = 0;  // (1/n) |D_hat - D|_F
  double frob_error = 0;       // |D_hat - D|_F
  double dist_error = 0;       // dist(X, X_hat) after classic MDS
  double wall_time_ms = 0;
  std::string flags;  // '|'-separated; failures show up here, never as missing rows
};

/// Runs every algorithm once on trial `trial` of grid point (p, nu).
/// Cloud, mask and noise depend only on (master_seed, trial), so grid points
/// share common random numbers.
std::vector<TrialRecord> run_trial(const ExperimentConfig& cfg, double p, double nu,
                                   std::uint64_t trial);

/// Full sweep, records ordered by (trial, p, nu, algorithm) whatever the
/// thread schedule.
std::vector<TrialRecord> run_sweep(const ExperimentConfig& cfg);

struct ErrorStats {
  double mean = 0;
  double std = 0;  // population
  double min = 0;
  double max = 0;
};

struct SummaryRow {
  Algorithm algorithm = Algorithm::kSvdReconstruct;
  double p = 0;
  double nu = 0;
  std::size_t count = 0;
  std::size_t failures = 0;
  ErrorStats per_entry;
  ErrorStats frob;
  ErrorStats dist;
};

/// Groups by (algorithm, p, nu) in first-appearance order. Records with
/// non-finite errors count as failures and are left out of the statistics.
std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records);

std::string records_to_csv(const std::vector<TrialRecord>& records);
std::string summary_to_csv(const std::vector<SummaryRow>& rows);

enum class OutputFormat { kCsv, kJson };

/// records.{csv,json}, summary.{csv,json} and meta.json under `dir`.
void write_sweep_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                         const std::vector<TrialRecord>& records, OutputFormat format);

}  // namespace svdmds
