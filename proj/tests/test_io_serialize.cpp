#include <doctest.h>

#include "svdmds/io.hpp"
#include "svdmds/mds.hpp"
#include "svdmds/serialize.hpp"
#include "svdmds/svd_reconstruct.hpp"
#include "test_support.hpp"

using namespace svdmds;
namespace fs = std::filesystem;

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("matrix CSV round trip") {
  const Eigen::MatrixXd m = test_support::random_matrix(4, 3, 1, -1e3, 1e3);
  const auto text = io::matrix_to_csv(m);
  CHECK(io::matrix_from_csv(text) == m);
  CHECK(io::matrix_from_csv("1,2\r\n3,4\r\n")(1, 0) == 3);
  CHECK_THROWS_AS(io::matrix_from_csv("1,2\n3\n"), std::invalid_argument);
  CHECK_THROWS_AS(io::matrix_from_csv("1,x\n"), std::invalid_argument);
  CHECK_THROWS_AS(io::matrix_from_csv(""), std::invalid_argument);
  CHECK_THROWS_AS(io::read_matrix_csv("/nonexistent/m.csv"), std::runtime_error);

  const auto dir = test_support::scratch_dir("csv");
  io::write_matrix_csv(dir / "nested" / "m.csv", m);
  CHECK(io::read_matrix_csv(dir / "nested" / "m.csv") == m);
  CHECK(io::matrix_to_json(m).size() == 4);
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(io::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("observation round trip") {
  const auto dir = test_support::scratch_dir("obs");
  const auto d = edm_from_points(sample_uniform_cloud(2, 8, -1, 1, SeedSpec{3, 1}));
  const auto obs = observe(d, 0.5, 0.25, SeedSpec{3, 1});
  write_observation(dir, obs);
  CHECK(fs::exists(dir / "y.csv"));
  CHECK(fs::exists(dir / "mask.csv"));
  const auto side = nlohmann::json::parse(io::read_text(dir / "observation.json"));
  CHECK(side["n"] == 8);
  CHECK(side["p"] == 0.5);
  CHECK(side["nu"] == 0.25);
  CHECK(side["master_seed"] == 3);
  CHECK(side["trial_index"] == 1);
  const auto back = read_observation(dir);
  CHECK(back.y() == obs.y());
  CHECK(back.mask().matrix() == obs.mask().matrix());
  CHECK(back.p() == obs.p());
  CHECK(back.seed() == obs.seed());
}

TEST_CASE("completion and mds outputs") {
  const auto dir = test_support::scratch_dir("completion");
  const auto d = edm_from_points(sample_uniform_cloud(3, 12, -1, 1, SeedSpec{4, 0}));
  const auto res = svd_reconstruct(observe(d, 1.0, 0.0, SeedSpec{4, 0}), 5);
  write_completion(dir, res, OutputFormat::kCsv);
  CHECK(io::read_matrix_csv(dir / "d_hat.csv") == res.d_hat);
  const auto diag = nlohmann::json::parse(io::read_text(dir / "completion.json"));
  CHECK(diag["rank"] == 5);
  CHECK(diag["kept_singular_values"].size() == 5);

  const auto mds = classic_mds(res.d_hat, 3);
  write_mds(dir, mds, OutputFormat::kJson);
  CHECK(fs::exists(dir / "x_hat.json"));
  const auto md = nlohmann::json::parse(io::read_text(dir / "mds.json"));
  CHECK(md["eigenvalues_used"].size() == 3);
}

TEST_CASE("packing output") {
  const auto dir = test_support::scratch_dir("packing");
  const auto ps = generate_packing(20, 4, 1.0, 3);
  write_packing(dir, ps, verify_packing(ps));
  const auto manifest = nlohmann::json::parse(io::read_text(dir / "manifest.json"));
  CHECK(manifest["M"] == ps.cardinality);
  CHECK(manifest["n"] == 20);
  CHECK(manifest["seed"] == 3);
  CHECK(manifest["files"].size() == ps.matrices.size());
  CHECK(io::read_matrix_csv(dir / manifest["files"][0].get<std::string>()) == ps.matrices[0]);
}
