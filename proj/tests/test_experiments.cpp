#include <doctest.h>

#include <filesystem>

#include "svdmds/experiments.hpp"
#include "svdmds/io.hpp"
#include "test_support.hpp"

using namespace svdmds;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.n = 20;
  cfg.d = 2;
  cfg.p_grid = {0.6, 1.0};
  cfg.nu_grid = {0.0, 0.5};
  cfg.r = 4;
  cfg.algorithms = {Algorithm::kSvdReconstruct, Algorithm::kOptSpace};
  cfg.trials = 3;
  cfg.master_seed = 17;
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST_CASE("algorithm names") {
  CHECK(to_string(Algorithm::kSvdReconstruct) == "svd_reconstruct");
  CHECK(to_string(Algorithm::kOptSpace) == "optspace");
  CHECK(algorithm_from_string("optspace") == Algorithm::kOptSpace);
  CHECK_THROWS_AS(algorithm_from_string("gd"), std::invalid_argument);
}

TEST_CASE("config parse and round trip") {
  const std::string text = R"(# comment line
schema_version = 1
n = 30
d = 2
p_grid = [0.25, 0.5]   # trailing comment
nu_grid = [0.1]
algorithms = ["optspace"]
outputs = "out dir"
fixed_cloud = true
master_seed = 18446744073709551615
optspace_tol = 1e-7
)";
  const auto cfg = parse_config(text);
  CHECK(cfg.n == 30);
  CHECK(cfg.d == 2);
  CHECK(cfg.p_grid == std::vector<double>{0.25, 0.5});
  CHECK(cfg.algorithms == std::vector<Algorithm>{Algorithm::kOptSpace});
  CHECK(cfg.outputs == "out dir");
  CHECK(cfg.fixed_cloud);
  CHECK(cfg.master_seed == 18446744073709551615ULL);
  CHECK(cfg.optspace_tol == 1e-7);
  CHECK(cfg.r == 5);

  const std::string once = serialize_config(cfg);
  CHECK(parse_config(once) == cfg);
  CHECK(serialize_config(parse_config(once)) == once);

  const auto def = ExperimentConfig{};
  CHECK(parse_config(serialize_config(def)) == def);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("n = 10\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("schema_version = 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("schema_version = 1\nbogus = 3\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("schema_version = 1\nn = 10\nn = 11\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("schema_version = 1\nn = ten\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("schema_version = 1\np_grid = [0.5, 1.5]\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("schema_version = 1\np_grid = []\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("schema_version = 1\nalgorithms = [\"x\"]\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("schema_version = 1\ntrials = 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("schema_version = 1\nn missing equals\n"), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/config.toml"), std::runtime_error);
}

TEST_CASE("shipped fig1 config") {
  const auto cfg = load_config(std::filesystem::path(SVDMDS_SOURCE_DIR) / "configs" / "fig1.toml");
  CHECK(cfg.n == 50);
  CHECK(cfg.d == 3);
  CHECK(cfg.r == 5);
  CHECK(cfg.trials == 20);
  CHECK(cfg.p_grid == std::vector<double>{0.5});
  CHECK(cfg.nu_grid.size() == 21);
  CHECK(cfg.nu_grid.front() == 0.1);
  CHECK(cfg.nu_grid.back() == 4.0);
  CHECK(cfg.algorithms.size() == 2);
}

TEST_CASE("config hash ignores output location and thread count") {
  auto a = small_config();
  auto b = a;
  b.outputs = "elsewhere";
  b.threads = 7;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.master_seed = 18;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("sweep record count, order and exact recovery") {
  const auto cfg = small_config();
  const auto records = run_sweep(cfg);
  REQUIRE(records.size() == 3u * 2u * 2u * 2u);
  std::size_t i = 0;
  for (std::uint64_t t = 0; t < 3; ++t)
    for (double p : cfg.p_grid)
      for (double nu : cfg.nu_grid)
        for (auto alg : cfg.algorithms) {
          CHECK(records[i].trial == t);
          CHECK(records[i].p == p);
          CHECK(records[i].nu == nu);
          CHECK(records[i].algorithm == alg);
          CHECK(records[i].wall_time_ms == 0);
          ++i;
        }
  for (const auto& r : records) {
    CHECK(r.per_entry_error >= 0);
    CHECK(r.frob_error == doctest::Approx(r.per_entry_error * 20).epsilon(1e-12));
    if (r.p == 1.0 && r.nu == 0.0) {
      // |D|_F for 20 points in the unit square is well above 1.
      CHECK(r.frob_error <= 1e-6 * 10);
      CHECK(r.dist_error <= 1e-6);
    }
  }
}

TEST_CASE("sweep is deterministic across thread counts") {
  auto cfg = small_config();
  const auto serial = records_to_csv(run_sweep(cfg));
  cfg.threads = 4;
  CHECK(records_to_csv(run_sweep(cfg)) == serial);
  CHECK(records_to_csv(run_sweep(cfg)) == serial);
}

TEST_CASE("common random numbers across grid points") {
  auto cfg = small_config();
  cfg.p_grid = {1.0};
  cfg.nu_grid = {0.2};
  cfg.algorithms = {Algorithm::kSvdReconstruct};
  const auto a = run_trial(cfg, 1.0, 0.2, 1);
  cfg.nu_grid = {0.2, 0.9};
  const auto b = run_trial(cfg, 1.0, 0.2, 1);
  CHECK(a.front().frob_error == b.front().frob_error);
}

TEST_CASE("fixed_cloud shares one cloud") {
  auto cfg = small_config();
  cfg.p_grid = {1.0};
  cfg.nu_grid = {0.0};
  cfg.algorithms = {Algorithm::kSvdReconstruct};
  cfg.r = 1;  // far too small, so the error depends on the cloud
  const auto fresh0 = run_trial(cfg, 1.0, 0.0, 0).front().frob_error;
  const auto fresh1 = run_trial(cfg, 1.0, 0.0, 1).front().frob_error;
  CHECK(fresh0 != fresh1);
  cfg.fixed_cloud = true;
  CHECK(run_trial(cfg, 1.0, 0.0, 0).front().frob_error ==
        run_trial(cfg, 1.0, 0.0, 1).front().frob_error);
}

TEST_CASE("aggregate") {
  TrialRecord one;
  one.per_entry_error = 1.5;
  one.frob_error = 2;
  one.dist_error = 3;
  auto rows = aggregate({one});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].per_entry.mean == 1.5);
  CHECK(rows[0].per_entry.std == 0);
  CHECK(rows[0].count == 1);

  TrialRecord a = one, b = one;
  a.frob_error = 1;
  b.frob_error = 3;
  rows = aggregate({a, b});
  CHECK(rows[0].frob.mean == 2);
  CHECK(rows[0].frob.std == 1);
  CHECK(rows[0].frob.min == 1);
  CHECK(rows[0].frob.max == 3);

  TrialRecord failed = one;
  failed.frob_error = std::numeric_limits<double>::quiet_NaN();
  rows = aggregate({a, failed});
  CHECK(rows[0].count == 2);
  CHECK(rows[0].failures == 1);
  CHECK(rows[0].frob.mean == 1);

  CHECK_THROWS_AS(aggregate({}), std::invalid_argument);

  auto cfg = small_config();
  cfg.p_grid = {0.5};
  cfg.nu_grid = {0.1, 0.2, 0.3};
  cfg.trials = 2;
  CHECK(aggregate(run_sweep(cfg)).size() == 3 * 2);
}

TEST_CASE("CSV layouts") {
  TrialRecord r;
  r.algorithm = Algorithm::kOptSpace;
  r.trial = 4;
  r.p = 0.5;
  r.nu = 0.1;
  r.per_entry_error = 0.25;
  r.frob_error = 5;
  r.dist_error = 0.125;
  r.flags = "trimmed:1|max_iters_reached";
  const auto csv = records_to_csv({r});
  CHECK(csv ==
        "algorithm,trial,p,nu,per_entry_error,frob_error,dist_error,wall_time_ms,flags\n"
        "optspace,4,0.5,0.10000000000000001,0.25,5,0.125,0,trimmed:1|max_iters_reached\n");
  const auto summary = summary_to_csv(aggregate({r}));
  CHECK(summary.rfind("algorithm,p,nu,count,failures,per_entry_error_mean,", 0) == 0);
}

TEST_CASE("sweep outputs") {
  const auto dir = test_support::scratch_dir("sweep");
  auto cfg = small_config();
  cfg.trials = 1;
  const auto records = run_sweep(cfg);
  write_sweep_outputs(dir, cfg, records, OutputFormat::kCsv);
  CHECK(std::filesystem::exists(dir / "records.csv"));
  CHECK(std::filesystem::exists(dir / "summary.csv"));
  const auto meta = nlohmann::json::parse(io::read_text(dir / "meta.json"));
  CHECK(meta["config_hash"] == config_hash(cfg));
  CHECK(meta["master_seed"] == 17);
  CHECK(meta["code_version"] == SVDMDS_VERSION);
  CHECK(meta["record_count"] == records.size());
  CHECK(io::read_text(dir / "records.csv") == records_to_csv(records));

  write_sweep_outputs(dir / "json", cfg, records, OutputFormat::kJson);
  const auto rec_json = nlohmann::json::parse(io::read_text(dir / "json" / "records.json"));
  CHECK(rec_json.size() == records.size());
  CHECK(std::filesystem::exists(dir / "json" / "summary.json"));
}
