#include "svdmds/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <thread>
#include <tuple>

#include "svdmds/io.hpp"
#include "svdmds/mds.hpp"
#include "svdmds/metrics.hpp"

namespace svdmds {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kSvdReconstruct:
      return "svd_reconstruct";
    case Algorithm::kOptSpace:
      return "optspace";
  }
  return "unknown";
}

Algorithm algorithm_from_string(std::string_view name) {
  if (name == "svd_reconstruct") return Algorithm::kSvdReconstruct;
  if (name == "optspace") return Algorithm::kOptSpace;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

namespace {

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += '|';
    out += f;
  }
  return out;
}

CompletionResult<double> complete(Algorithm a, const Observation& obs,
                                  const ExperimentConfig& cfg) {
  switch (a) {
    case Algorithm::kSvdReconstruct:
      return svd_reconstruct(obs, cfg.r);
    case Algorithm::kOptSpace:
      return optspace_complete(obs, cfg.optspace());
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace

std::vector<TrialRecord> run_trial(const ExperimentConfig& cfg, double p, double nu,
                                   std::uint64_t trial) {
  const SeedSpec trial_seed{cfg.master_seed, trial};
  const SeedSpec cloud_seed{cfg.master_seed, cfg.fixed_cloud ? 0 : trial};
  const auto cloud = sample_uniform_cloud(cfg.d, cfg.n, cfg.coord_lo, cfg.coord_hi, cloud_seed);
  const auto edm = edm_from_points(cloud);
  const auto obs = observe(edm, p, nu, trial_seed);

  std::vector<TrialRecord> out;
  out.reserve(cfg.algorithms.size());
  for (Algorithm a : cfg.algorithms) {
    TrialRecord rec;
    rec.algorithm = a;
    rec.trial = trial;
    rec.p = p;
    rec.nu = nu;
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto result = complete(a, obs, cfg);
      rec.frob_error = (result.d_hat - edm.matrix()).norm();
      rec.per_entry_error = per_entry_error(result.d_hat, edm.matrix());
      const auto mds = classic_mds(result.d_hat, cfg.d);
      rec.dist_error = dist_metric(cloud.coords(), mds.x_hat);
      rec.flags = join_flags(result.flags);
    } catch (const std::exception& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      rec.frob_error = rec.per_entry_error = rec.dist_error = nan;
      std::string what = e.what();
      std::replace(what.begin(), what.end(), ',', ';');
      std::replace(what.begin(), what.end(), '\n', ' ');
      rec.flags = "error:" + what;
    }
    if (cfg.record_wall_time) {
      rec.wall_time_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<TrialRecord> run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  struct Task {
    double p;
    double nu;
    std::uint64_t trial;
  };
  std::vector<Task> tasks;
  for (int t = 0; t < cfg.trials; ++t)
    for (double p : cfg.p_grid)
      for (double nu : cfg.nu_grid) tasks.push_back({p, nu, static_cast<std::uint64_t>(t)});

  // Each task writes only its own slot; output order is fixed up front.
  std::vector<std::vector<TrialRecord>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++)
      slots[i] = run_trial(cfg, tasks[i].p, tasks[i].nu, tasks[i].trial);
  };

  unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }

  std::vector<TrialRecord> records;
  records.reserve(tasks.size() * cfg.algorithms.size());
  for (auto& slot : slots)
    for (auto& rec : slot) records.push_back(std::move(rec));
  return records;
}

namespace {

ErrorStats stats_of(const std::vector<double>& values) {
  ErrorStats s;
  if (values.empty()) {
    s.mean = s.std = s.min = s.max = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double sum = 0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(values.size()));
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

}  // namespace

std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records) {
  require(!records.empty(), "aggregate: no records");
  using Key = std::tuple<int, double, double>;
  std::map<Key, std::size_t> index;
  std::vector<SummaryRow> rows;
  std::vector<std::array<std::vector<double>, 3>> samples;
  for (const auto& rec : records) {
    const Key key{static_cast<int>(rec.algorithm), rec.p, rec.nu};
    auto [it, inserted] = index.emplace(key, rows.size());
    if (inserted) {
      SummaryRow row;
      row.algorithm = rec.algorithm;
      row.p = rec.p;
      row.nu = rec.nu;
      rows.push_back(row);
      samples.emplace_back();
    }
    auto& row = rows[it->second];
    ++row.count;
    if (!std::isfinite(rec.frob_error) || !std::isfinite(rec.per_entry_error) ||
        !std::isfinite(rec.dist_error)) {
      ++row.failures;
      continue;
    }
    auto& bucket = samples[it->second];
    bucket[0].push_back(rec.per_entry_error);
    bucket[1].push_back(rec.frob_error);
    bucket[2].push_back(rec.dist_error);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].per_entry = stats_of(samples[i][0]);
    rows[i].frob = stats_of(samples[i][1]);
    rows[i].dist = stats_of(samples[i][2]);
  }
  return rows;
}

std::string records_to_csv(const std::vector<TrialRecord>& records) {
  using io::format_double;
  std::string out =
      "algorithm,trial,p,nu,per_entry_error,frob_error,dist_error,wall_time_ms,flags\n";
  for (const auto& r : records) {
    out += std::string(to_string(r.algorithm)) + ',' + std::to_string(r.trial) + ',' +
           format_double(r.p) + ',' + format_double(r.nu) + ',' +
           format_double(r.per_entry_error) + ',' + format_double(r.frob_error) + ',' +
           format_double(r.dist_error) + ',' + format_double(r.wall_time_ms) + ',' + r.flags +
           '\n';
  }
  return out;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  using io::format_double;
  std::string out = "algorithm,p,nu,count,failures";
  for (const char* metric : {"per_entry_error", "frob_error", "dist_error"})
    for (const char* stat : {"mean", "std", "min", "max"})
      out += std::string(",") + metric + "_" + stat;
  out += '\n';
  for (const auto& row : rows) {
    out += std::string(to_string(row.algorithm)) + ',' + format_double(row.p) + ',' +
           format_double(row.nu) + ',' + std::to_string(row.count) + ',' +
           std::to_string(row.failures);
    for (const ErrorStats* s : {&row.per_entry, &row.frob, &row.dist})
      out += ',' + format_double(s->mean) + ',' + format_double(s->std) + ',' +
             format_double(s->min) + ',' + format_double(s->max);
    out += '\n';
  }
  return out;
}

namespace {

nlohmann::json stats_json(const ErrorStats& s) {
  return {{"mean", s.mean}, {"std", s.std}, {"min", s.min}, {"max", s.max}};
}

}  // namespace

void write_sweep_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                         const std::vector<TrialRecord>& records, OutputFormat format) {
  const auto summary = aggregate(records);
  if (format == OutputFormat::kCsv) {
    io::write_text(dir / "records.csv", records_to_csv(records));
    io::write_text(dir / "summary.csv", summary_to_csv(summary));
  } else {
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& r : records)
      recs.push_back({{"algorithm", to_string(r.algorithm)},
                      {"trial", r.trial},
                      {"p", r.p},
                      {"nu", r.nu},
                      {"per_entry_error", r.per_entry_error},
                      {"frob_error", r.frob_error},
                      {"dist_error", r.dist_error},
                      {"wall_time_ms", r.wall_time_ms},
                      {"flags", r.flags}});
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : summary)
      rows.push_back({{"algorithm", to_string(s.algorithm)},
                      {"p", s.p},
                      {"nu", s.nu},
                      {"count", s.count},
                      {"failures", s.failures},
                      {"per_entry_error", stats_json(s.per_entry)},
                      {"frob_error", stats_json(s.frob)},
                      {"dist_error", stats_json(s.dist)}});
    io::write_json(dir / "records.json", recs);
    io::write_json(dir / "summary.json", rows);
  }
  nlohmann::json meta = {
      {"schema_version", cfg.schema_version},
      {"config_hash", config_hash(cfg)},
      {"master_seed", cfg.master_seed},
      {"code_version", SVDMDS_VERSION},
      {"record_count", records.size()},
      {"config", serialize_config(cfg)},
  };
  io::write_json(dir / "meta.json", meta);
}

}  // namespace svdmds
