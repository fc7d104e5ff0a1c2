#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "svdmds/experiments.hpp"
#include "svdmds/io.hpp"

namespace svdmds {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void fail(int line, const std::string& message) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + message);
}

// Drops a trailing '#' comment that is not inside a string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

double parse_number(const std::string& token, int line) {
  double value = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (!token.empty() && token.front() == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) fail(line, "expected a number, got '" + token + "'");
  return value;
}

std::int64_t parse_integer(const std::string& token, int line) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    fail(line, "expected an integer, got '" + token + "'");
  return value;
}

std::uint64_t parse_unsigned(const std::string& token, int line) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    fail(line, "expected an unsigned integer, got '" + token + "'");
  return value;
}

bool parse_bool(const std::string& token, int line) {
  if (token == "true") return true;
  if (token == "false") return false;
  fail(line, "expected true or false, got '" + token + "'");
}

std::string parse_string(const std::string& token, int line) {
  if (token.size() < 2 || token.front() != '"' || token.back() != '"')
    fail(line, "expected a quoted string, got '" + token + "'");
  std::string out;
  for (std::size_t i = 1; i + 1 < token.size(); ++i) {
    if (token[i] == '\\') {
      if (i + 2 >= token.size()) fail(line, "dangling escape");
      out += token[++i];
    } else if (token[i] == '"') {
      fail(line, "unescaped quote inside string");
    } else {
      out += token[i];
    }
  }
  return out;
}

std::vector<std::string> parse_array(const std::string& token, int line) {
  if (token.size() < 2 || token.front() != '[' || token.back() != ']')
    fail(line, "expected an array, got '" + token + "'");
  std::vector<std::string> items;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 1; i + 1 < token.size(); ++i) {
    const char c = token[i];
    if (c == '"' && (i == 0 || token[i - 1] != '\\')) quoted = !quoted;
    if (c == ',' && !quoted) {
      items.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!trim(current).empty() || !items.empty()) items.push_back(trim(current));
  for (const auto& item : items)
    if (item.empty()) fail(line, "empty array element");
  return items;
}

std::string number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  std::string s(buf, ptr);
  // Keep a decimal point so the value reads back as a real.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

template <typename T, typename F>
std::string list(const std::vector<T>& items, F&& format) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += format(items[i]);
  }
  return out + "]";
}

}  // namespace

void ExperimentConfig::validate() const {
  require(schema_version == kConfigSchemaVersion, "config: unsupported schema_version");
  require(d >= 1, "config: d must be positive");
  require(n > d, "config: n must exceed d");
  require(r >= 1 && r <= n, "config: r must lie in [1, n]");
  require(coord_lo < coord_hi, "config: need coord_lo < coord_hi");
  require(!p_grid.empty(), "config: p_grid is empty");
  require(!nu_grid.empty(), "config: nu_grid is empty");
  for (double p : p_grid) require(p > 0.0 && p <= 1.0, "config: every p must lie in (0, 1]");
  for (double nu : nu_grid)
    require(nu >= 0.0 && std::isfinite(nu), "config: every nu must be nonnegative");
  require(trials >= 1, "config: trials must be at least 1");
  require(!algorithms.empty(), "config: algorithms is empty");
  for (std::size_t i = 0; i < algorithms.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      require(algorithms[i] != algorithms[j], "config: algorithm listed twice");
  require(threads >= 0, "config: threads must be nonnegative");
  optspace().validate();
}

OptSpaceConfig ExperimentConfig::optspace() const {
  OptSpaceConfig c;
  c.r = r;
  c.max_iters = optspace_max_iters;
  c.tol = optspace_tol;
  c.trim = optspace_trim;
  c.damping = optspace_damping;
  return c;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::map<std::string, int> seen;
  bool have_version = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string content = trim(strip_comment(raw));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty() || value.empty()) fail(line, "expected 'key = value'");
    if (!seen.emplace(key, line).second) fail(line, "duplicate key '" + key + "'");

    if (key == "schema_version") {
      cfg.schema_version = static_cast<int>(parse_integer(value, line));
      if (cfg.schema_version != kConfigSchemaVersion)
        fail(line, "unsupported schema_version " + value);
      have_version = true;
    } else if (key == "n") {
      cfg.n = parse_integer(value, line);
    } else if (key == "d") {
      cfg.d = parse_integer(value, line);
    } else if (key == "coord_lo") {
      cfg.coord_lo = parse_number(value, line);
    } else if (key == "coord_hi") {
      cfg.coord_hi = parse_number(value, line);
    } else if (key == "p_grid") {
      cfg.p_grid.clear();
      for (const auto& item : parse_array(value, line))
        cfg.p_grid.push_back(parse_number(item, line));
    } else if (key == "nu_grid") {
      cfg.nu_grid.clear();
      for (const auto& item : parse_array(value, line))
        cfg.nu_grid.push_back(parse_number(item, line));
    } else if (key == "r") {
      cfg.r = parse_integer(value, line);
    } else if (key == "algorithms") {
      cfg.algorithms.clear();
      for (const auto& item : parse_array(value, line)) {
        try {
          cfg.algorithms.push_back(algorithm_from_string(parse_string(item, line)));
        } catch (const std::invalid_argument& e) {
          fail(line, e.what());
        }
      }
    } else if (key == "trials") {
      cfg.trials = static_cast<int>(parse_integer(value, line));
    } else if (key == "master_seed") {
      cfg.master_seed = parse_unsigned(value, line);
    } else if (key == "outputs") {
      cfg.outputs = parse_string(value, line);
    } else if (key == "fixed_cloud") {
      cfg.fixed_cloud = parse_bool(value, line);
    } else if (key == "record_wall_time") {
      cfg.record_wall_time = parse_bool(value, line);
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(parse_integer(value, line));
    } else if (key == "optspace_max_iters") {
      cfg.optspace_max_iters = static_cast<int>(parse_integer(value, line));
    } else if (key == "optspace_tol") {
      cfg.optspace_tol = parse_number(value, line);
    } else if (key == "optspace_trim") {
      cfg.optspace_trim = parse_bool(value, line);
    } else if (key == "optspace_damping") {
      cfg.optspace_damping = parse_number(value, line);
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }
  if (!have_version) throw std::invalid_argument("config: schema_version is required");
  cfg.validate();
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "schema_version = " << cfg.schema_version << '\n'
      << "n = " << cfg.n << '\n'
      << "d = " << cfg.d << '\n'
      << "coord_lo = " << number(cfg.coord_lo) << '\n'
      << "coord_hi = " << number(cfg.coord_hi) << '\n'
      << "p_grid = " << list(cfg.p_grid, number) << '\n'
      << "nu_grid = " << list(cfg.nu_grid, number) << '\n'
      << "r = " << cfg.r << '\n'
      << "algorithms = "
      << list(cfg.algorithms, [](Algorithm a) { return quoted(std::string(to_string(a))); })
      << '\n'
      << "trials = " << cfg.trials << '\n'
      << "master_seed = " << cfg.master_seed << '\n'
      << "outputs = " << quoted(cfg.outputs) << '\n'
      << "fixed_cloud = " << (cfg.fixed_cloud ? "true" : "false") << '\n'
      << "record_wall_time = " << (cfg.record_wall_time ? "true" : "false") << '\n'
      << "threads = " << cfg.threads << '\n'
      << "optspace_max_iters = " << cfg.optspace_max_iters << '\n'
      << "optspace_tol = " << number(cfg.optspace_tol) << '\n'
      << "optspace_trim = " << (cfg.optspace_trim ? "true" : "false") << '\n'
      << "optspace_damping = " << number(cfg.optspace_damping) << '\n';
  return out.str();
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(io::read_text(path));
}

std::string config_hash(const ExperimentConfig& cfg) {
  // Execution details do not change results.
  ExperimentConfig canonical = cfg;
  canonical.outputs.clear();
  canonical.threads = 0;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(io::fnv1a64(serialize_config(canonical))));
  return buf;
}

}  // namespace svdmds
