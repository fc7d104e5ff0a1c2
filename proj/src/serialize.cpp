#include "svdmds/serialize.hpp"

#include <cstdio>
#include <limits>

#include "svdmds/io.hpp"

namespace svdmds {

void write_observation(const std::filesystem::path& dir, const Observation& obs) {
  io::write_matrix_csv(dir / "y.csv", obs.y());
  io::write_matrix_csv(dir / "mask.csv", obs.mask().matrix());
  io::write_json(dir / "observation.json", {{"n", obs.size()},
                                            {"p", obs.p()},
                                            {"nu", obs.nu()},
                                            {"master_seed", obs.seed().master_seed},
                                            {"trial_index", obs.seed().trial_index}});
}

Observation read_observation(const std::filesystem::path& dir) {
  const auto meta = nlohmann::json::parse(io::read_text(dir / "observation.json"));
  Eigen::MatrixXd y = io::read_matrix_csv(dir / "y.csv");
  MaskMatrix mask(io::read_matrix_csv(dir / "mask.csv"));
  require(meta.at("n").get<Eigen::Index>() == y.rows(), "observation.json: n does not match y.csv");
  SeedSpec seed{meta.value("master_seed", std::uint64_t{0}),
                meta.value("trial_index", std::uint64_t{0})};
  return Observation(std::move(y), std::move(mask), meta.at("p").get<double>(),
                     meta.at("nu").get<double>(), seed);
}

nlohmann::json completion_diagnostics(const CompletionResult<double>& result) {
  return {{"rank", result.rank},
          {"kept_singular_values", result.kept_singular_values},
          {"discarded_energy", result.discarded_energy},
          {"degenerate_spectrum", result.degenerate_spectrum},
          {"iterations", result.iterations},
          {"converged", result.converged},
          {"objective_history", result.objective_history},
          {"flags", result.flags}};
}

nlohmann::json mds_diagnostics(const MdsResult<double>& result) {
  return {{"d", result.x_hat.rows()},
          {"n", result.x_hat.cols()},
          {"eigenvalues_used", result.eigenvalues_used},
          {"negative_mass", result.negative_mass}};
}

void write_completion(const std::filesystem::path& dir, const CompletionResult<double>& result,
                      OutputFormat format) {
  if (format == OutputFormat::kCsv)
    io::write_matrix_csv(dir / "d_hat.csv", result.d_hat);
  else
    io::write_json(dir / "d_hat.json", io::matrix_to_json(result.d_hat));
  io::write_json(dir / "completion.json", completion_diagnostics(result));
}

void write_mds(const std::filesystem::path& dir, const MdsResult<double>& result,
               OutputFormat format) {
  if (format == OutputFormat::kCsv)
    io::write_matrix_csv(dir / "x_hat.csv", result.x_hat);
  else
    io::write_json(dir / "x_hat.json", io::matrix_to_json(result.x_hat));
  io::write_json(dir / "mds.json", mds_diagnostics(result));
}

void write_packing(const std::filesystem::path& dir, const PackingSet& ps,
                   const PackingVerification& verification) {
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t l = 0; l < ps.matrices.size(); ++l) {
    char name[32];
    std::snprintf(name, sizeof name, "D_%05zu.csv", l + 1);
    io::write_matrix_csv(dir / name, ps.matrices[l]);
    files.push_back(name);
  }
  const bool has_pairs = std::isfinite(verification.min_pairwise);
  io::write_json(dir / "manifest.json",
                 {{"n", ps.n},
                  {"r", ps.r},
                  {"delta", ps.delta},
                  {"M", ps.cardinality},
                  {"sampled", ps.matrices.size()},
                  {"seed", ps.seed},
                  {"scale_used", ps.scale_used},
                  {"raw_norm_closed_form", packing_raw_norm(ps.n, ps.r)},
                  {"success", verification.success},
                  {"norms_ok", verification.norms_ok},
                  {"min_pairwise", has_pairs ? nlohmann::json(verification.min_pairwise)
                                             : nlohmann::json(nullptr)},
                  {"files", files}});
}

}  // namespace svdmds
