#pragma once

#include <filesystem>

#include <json.hpp>

#include "svdmds/experiments.hpp"
#include "svdmds/mds.hpp"
#include "svdmds/packing.hpp"
#include "svdmds/sampling.hpp"
#include "svdmds/svd_reconstruct.hpp"

namespace svdmds {

// On-disk layouts shared by the CLI and external tooling. Matrices are
// row-major CSV with 17 significant digits (or nested JSON arrays).

/// y.csv, mask.csv and observation.json {n, p, nu, master_seed, trial_index}.
void write_observation(const std::filesystem::path& dir, const Observation& obs);
Observation read_observation(const std::filesystem::path& dir);

nlohmann::json completion_diagnostics(const CompletionResult<double>& result);
nlohmann::json mds_diagnostics(const MdsResult<double>& result);

/// d_hat.{csv,json} plus completion.json.
void write_completion(const std::filesystem::path& dir, const CompletionResult<double>& result,
                      OutputFormat format);

/// x_hat.{csv,json} (d rows x n columns) plus mds.json.
void write_mds(const std::filesystem::path& dir, const MdsResult<double>& result,
               OutputFormat format);

/// D_00001.csv ... plus manifest.json {n, r, delta, M, seed, ...}.
void write_packing(const std::filesystem::path& dir, const PackingSet& ps,
                   const PackingVerification& verification);

}  // namespace svdmds
