#include "svdmds/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "svdmds/experiments.hpp"
#include "svdmds/io.hpp"
#include "svdmds/mds.hpp"
#include "svdmds/metrics.hpp"
#include "svdmds/optspace.hpp"
#include "svdmds/packing.hpp"
#include "svdmds/serialize.hpp"
#include "svdmds/svd_reconstruct.hpp"

namespace svdmds {

namespace {

namespace fs = std::filesystem;

struct CompletionOptions {
  std::string observation_dir;
  std::string y_path;
  std::string mask_path;
  std::optional<double> p;
  bool estimate_p = false;
  double nu = 0.0;
  Eigen::Index r = 5;
  std::string algorithm = "svd_reconstruct";
  int max_iters = 100;
  double tol = 1e-6;
  double damping = 20.0;
  bool no_trim = false;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
};

void add_completion_options(CLI::App* cmd, CompletionOptions& o) {
  cmd->add_option("--observation", o.observation_dir,
                  "Directory with y.csv, mask.csv and observation.json");
  cmd->add_option("--y", o.y_path, "Observed matrix CSV (zeros where unobserved)");
  cmd->add_option("--mask", o.mask_path, "Symmetric 0/1 mask CSV");
  cmd->add_option("--p", o.p, "Observation probability (0, 1]");
  cmd->add_flag("--estimate-p", o.estimate_p, "Estimate p from the mask instead of --p");
  cmd->add_option("--nu", o.nu, "Noise standard deviation (recorded only)");
  cmd->add_option("--r", o.r, "Completion rank")->check(CLI::PositiveNumber);
  cmd->add_option("--algorithm", o.algorithm)
      ->check(CLI::IsMember({"svd_reconstruct", "optspace"}));
  cmd->add_option("--max-iters", o.max_iters, "optspace: sweep limit");
  cmd->add_option("--tol", o.tol, "optspace: relative decrease threshold");
  cmd->add_option("--damping", o.damping, "optspace: proximal damping");
  cmd->add_flag("--no-trim", o.no_trim, "optspace: disable trimming");
  cmd->add_option("--seed", o.seed, "Seed recorded with the observation");
  cmd->add_option("--out", o.out, "Output directory")->required();
  cmd->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
}

OutputFormat parse_format(const std::string& f) {
  return f == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
}

Observation load_observation(const CompletionOptions& o, std::ostream& err) {
  if (!o.observation_dir.empty()) {
    require(o.y_path.empty() && o.mask_path.empty(),
            "--observation cannot be combined with --y/--mask");
    Observation obs = read_observation(o.observation_dir);
    if (!o.p && !o.estimate_p) return obs;
    const double p = o.p ? *o.p : estimate_p(obs.mask());
    return Observation(obs.y(), obs.mask(), p, obs.nu(), obs.seed());
  }
  require(!o.y_path.empty() && !o.mask_path.empty(),
          "either --observation or both --y and --mask are required");
  require(o.p.has_value() != o.estimate_p, "pass exactly one of --p and --estimate-p");
  MaskMatrix mask(io::read_matrix_csv(o.mask_path));
  Eigen::MatrixXd y = io::read_matrix_csv(o.y_path);
  double p = 0;
  if (o.p) {
    p = *o.p;
  } else {
    p = estimate_p(mask);
    err << "note: estimated p = " << io::format_double(p) << " from the mask\n";
  }
  return Observation(std::move(y), std::move(mask), p, o.nu, SeedSpec{o.seed.value_or(0), 0});
}

CompletionResult<double> run_completion(const CompletionOptions& o, const Observation& obs) {
  if (o.algorithm == "optspace") {
    OptSpaceConfig cfg;
    cfg.r = o.r;
    cfg.max_iters = o.max_iters;
    cfg.tol = o.tol;
    cfg.damping = o.damping;
    cfg.trim = !o.no_trim;
    return optspace_complete(obs, cfg);
  }
  return svd_reconstruct(obs, o.r);
}

std::vector<std::string> bounds_table(const std::vector<double>& ns, const std::vector<double>& ps,
                                      const std::vector<double>& rs,
                                      const std::vector<double>& nus, double d,
                                      std::optional<double> zeta, double c,
                                      std::optional<double> t, std::ostream& err) {
  std::vector<std::string> lines;
  lines.emplace_back(
      "n,p,m,r,d,zeta,nu,c,t,expectation_bound,tail_bound,tail_probability,coordinate_bound,"
      "minimax_lower_bound");
  using io::format_double;
  for (double n : ns)
    for (double p : ps)
      for (double r : rs)
        for (double nu : nus) {
          require(p > 0 && p <= 1, "--p values must lie in (0, 1]");
          const auto bp =
              BoundParams::from_probability(n, p, r, d, zeta.value_or(4.0 * d), nu, c);
          bp.validate();
          for (const auto& w : bp.warnings()) err << "warning: " << w << '\n';
          const double tv = t.value_or(tail_branch_point(bp));
          lines.push_back(format_double(n) + ',' + format_double(p) + ',' +
                          format_double(bp.m) + ',' + format_double(r) + ',' +
                          format_double(d) + ',' + format_double(bp.zeta) + ',' +
                          format_double(nu) + ',' + format_double(c) + ',' +
                          format_double(tv) + ',' + format_double(expectation_bound(bp)) + ',' +
                          format_double(tail_bound(tv, bp)) + ',' +
                          format_double(tail_probability(tv, bp)) + ',' +
                          format_double(coordinate_bound(bp)) + ',' +
                          format_double(minimax_lower_bound(bp)));
        }
  return lines;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"SVD-MDS: EDM completion, classic MDS and Monte Carlo checks", "svdmds"};
  app.require_subcommand(1);

  CompletionOptions complete_opts;
  auto* complete_cmd = app.add_subcommand("complete", "Complete one observed EDM");
  add_completion_options(complete_cmd, complete_opts);

  CompletionOptions localize_opts;
  Eigen::Index localize_dim = 3;
  std::string truth_path;
  auto* localize_cmd = app.add_subcommand("localize", "Complete an EDM and run classic MDS");
  add_completion_options(localize_cmd, localize_opts);
  localize_cmd->add_option("--d", localize_dim, "Ambient dimension")->check(CLI::PositiveNumber);
  localize_cmd->add_option("--points", truth_path,
                           "True coordinates CSV (d x n) for dist and aligned output");

  std::string config_path, sweep_out, sweep_format = "csv";
  std::optional<std::uint64_t> sweep_seed;
  std::optional<int> sweep_threads;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a Monte Carlo sweep from a config file");
  sweep_cmd->add_option("--config", config_path, "Config file")->required();
  sweep_cmd->add_option("--out", sweep_out, "Output directory (default: config outputs)");
  sweep_cmd->add_option("--seed", sweep_seed, "Override master_seed");
  sweep_cmd->add_option("--threads", sweep_threads, "Override threads");
  sweep_cmd->add_option("--format", sweep_format)->check(CLI::IsMember({"csv", "json"}));

  Eigen::Index pack_n = 100, pack_r = 4;
  double pack_delta = 1.0;
  std::uint64_t pack_seed = 0;
  std::optional<std::uint64_t> pack_sample;
  std::string pack_out, pack_format = "csv";
  auto* packing_cmd = app.add_subcommand("packing", "Generate and verify a packing set");
  packing_cmd->add_option("--n", pack_n)->required();
  packing_cmd->add_option("--r", pack_r)->required();
  packing_cmd->add_option("--delta", pack_delta);
  packing_cmd->add_option("--seed", pack_seed);
  packing_cmd->add_option("--sample-m", pack_sample, "Draw this many matrices instead of M");
  packing_cmd->add_option("--out", pack_out, "Output directory")->required();
  packing_cmd->add_option("--format", pack_format)->check(CLI::IsMember({"csv", "json"}));

  std::vector<double> b_n, b_p, b_r, b_nu;
  double b_d = 3, b_c = 1;
  std::optional<double> b_zeta, b_t;
  std::string b_out, b_format = "csv";
  auto* bounds_cmd = app.add_subcommand("bounds", "Tabulate the closed-form bounds over a grid");
  bounds_cmd->add_option("--n", b_n, "Node counts")->required()->delimiter(',');
  bounds_cmd->add_option("--p", b_p, "Observation probabilities")->required()->delimiter(',');
  bounds_cmd->add_option("--r", b_r, "Ranks")->required()->delimiter(',');
  bounds_cmd->add_option("--nu", b_nu, "Noise levels")->required()->delimiter(',');
  bounds_cmd->add_option("--d", b_d, "Ambient dimension");
  bounds_cmd->add_option("--zeta", b_zeta, "Entry bound (default 4 d, the unit cube diameter^2)");
  bounds_cmd->add_option("--c", b_c, "Absolute constant");
  bounds_cmd->add_option("--t", b_t, "Tail threshold (default: branch point)");
  bounds_cmd->add_option("--out", b_out, "Output directory");
  bounds_cmd->add_option("--format", b_format)->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*complete_cmd) {
      const auto obs = load_observation(complete_opts, err);
      const auto result = run_completion(complete_opts, obs);
      write_completion(complete_opts.out, result, parse_format(complete_opts.format));
    } else if (*localize_cmd) {
      const auto obs = load_observation(localize_opts, err);
      const auto result = run_completion(localize_opts, obs);
      const auto mds = classic_mds(result.d_hat, localize_dim);
      const auto format = parse_format(localize_opts.format);
      write_completion(localize_opts.out, result, format);
      write_mds(localize_opts.out, mds, format);
      if (!truth_path.empty()) {
        const Eigen::MatrixXd truth = io::read_matrix_csv(truth_path);
        require(truth.cols() == mds.x_hat.cols(), "--points: node count differs");
        auto diag = mds_diagnostics(mds);
        diag["dist"] = dist_metric(truth, mds.x_hat);
        io::write_json(fs::path(localize_opts.out) / "mds.json", diag);
        if (truth.rows() == mds.x_hat.rows())
          io::write_matrix_csv(fs::path(localize_opts.out) / "x_aligned.csv",
                               align_rigid(truth, mds.x_hat));
      }
    } else if (*sweep_cmd) {
      auto cfg = load_config(config_path);
      if (sweep_seed) cfg.master_seed = *sweep_seed;
      if (sweep_threads) cfg.threads = *sweep_threads;
      if (!sweep_out.empty()) cfg.outputs = sweep_out;
      cfg.validate();
      const auto records = run_sweep(cfg);
      write_sweep_outputs(cfg.outputs, cfg, records, parse_format(sweep_format));
      std::size_t failures = 0;
      for (const auto& r : records)
        if (r.flags.rfind("error:", 0) == 0) ++failures;
      out << records.size() << " records written to " << cfg.outputs;
      if (failures > 0) out << " (" << failures << " failed trials flagged)";
      out << '\n';
    } else if (*packing_cmd) {
      const auto ps = generate_packing(pack_n, pack_r, pack_delta, pack_seed, pack_sample);
      const auto verification = verify_packing(ps);
      write_packing(pack_out, ps, verification);
      out << "M=" << ps.cardinality << " sampled=" << ps.matrices.size()
          << " success=" << (verification.success ? "true" : "false")
          << " min_pairwise=" << io::format_double(verification.min_pairwise) << '\n';
    } else if (*bounds_cmd) {
      const auto lines = bounds_table(b_n, b_p, b_r, b_nu, b_d, b_zeta, b_c, b_t, err);
      std::string table;
      for (const auto& l : lines) table += l + '\n';
      out << table;
      if (!b_out.empty()) {
        if (b_format == "csv") {
          io::write_text(fs::path(b_out) / "bounds.csv", table);
        } else {
          nlohmann::json rows = nlohmann::json::array();
          std::vector<std::string> header;
          std::stringstream hs(lines.front());
          for (std::string h; std::getline(hs, h, ',');) header.push_back(h);
          for (std::size_t i = 1; i < lines.size(); ++i) {
            nlohmann::json row;
            std::stringstream ls(lines[i]);
            std::size_t k = 0;
            for (std::string v; std::getline(ls, v, ','); ++k) row[header[k]] = std::stod(v);
            rows.push_back(row);
          }
          io::write_json(fs::path(b_out) / "bounds.json", rows);
        }
      }
    }
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

int cli_main(int argc, const char* const* argv) {
  return cli_main(argc, argv, std::cout, std::cerr);
}

}  // namespace svdmds
