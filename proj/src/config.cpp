#include "qlcoll/config.hpp"

#include "qlcoll/csv.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <set>

namespace qlcoll {

namespace {

using Setter = std::function<void(StudyConfig&, std::string_view)>;

int to_int(std::string_view v) { return static_cast<int>(csv::parse_int(v)); }

bool to_bool(std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw Error("expected true or false");
}

template <typename T, typename F>
std::vector<T> to_list(std::string_view v, F parse) {
  std::vector<T> out;
  for (const auto& field : csv::split(v)) out.push_back(static_cast<T>(parse(csv::trim(field))));
  return out;
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"problem", [](StudyConfig& c, std::string_view v) { c.problem = std::string(v); }},
      {"kernel.nu", [](StudyConfig& c, std::string_view v) { c.nu = csv::parse_double(v); }},
      {"kernel.eps", [](StudyConfig& c, std::string_view v) { c.eps = csv::parse_double(v); }},
      {"levels", [](StudyConfig& c, std::string_view v) { c.levels = to_list<int>(v, csv::parse_int); }},
      {"fill_targets",
       [](StudyConfig& c, std::string_view v) {
         c.fill_targets = to_list<double>(v, csv::parse_double);
       }},
      {"centers.strategy",
       [](StudyConfig& c, std::string_view v) {
         c.center_strategy = parse_point_strategy(std::string(v));
       }},
      {"test.strategy",
       [](StudyConfig& c, std::string_view v) {
         c.test_strategy = parse_point_strategy(std::string(v));
       }},
      {"seed",
       [](StudyConfig& c, std::string_view v) {
         const long long s = csv::parse_int(v);
         if (s < 0) throw Error("seed must be non-negative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"oversampling.rho",
       [](StudyConfig& c, std::string_view v) { c.oversampling.rho = csv::parse_double(v); }},
      {"oversampling.beta",
       [](StudyConfig& c, std::string_view v) { c.oversampling.beta = csv::parse_double(v); }},
      {"test.w_b", [](StudyConfig& c, std::string_view v) { c.boundary_weight = csv::parse_double(v); }},
      {"test.interior", [](StudyConfig& c, std::string_view v) { c.interior_count = to_int(v); }},
      {"test.boundary", [](StudyConfig& c, std::string_view v) { c.boundary_count = to_int(v); }},
      {"analysis.gamma", [](StudyConfig& c, std::string_view v) { c.gamma = csv::parse_double(v); }},
      {"analysis.probe_resolution",
       [](StudyConfig& c, std::string_view v) { c.probe_resolution = to_int(v); }},
      {"analysis.hoelder_trials",
       [](StudyConfig& c, std::string_view v) { c.hoelder_trials = to_int(v); }},
      {"analysis.hoelder_pairs",
       [](StudyConfig& c, std::string_view v) { c.hoelder_pairs = to_int(v); }},
      {"analysis.hoelder_probe_resolution",
       [](StudyConfig& c, std::string_view v) { c.hoelder_probe = to_int(v); }},
      {"analysis.stability_pairs",
       [](StudyConfig& c, std::string_view v) { c.stability_pairs = to_int(v); }},
      {"analysis.stability_radius",
       [](StudyConfig& c, std::string_view v) { c.stability_radius = csv::parse_double(v); }},
      {"solver.max_iter", [](StudyConfig& c, std::string_view v) { c.solver.max_iter = to_int(v); }},
      {"solver.tol_residual_sup",
       [](StudyConfig& c, std::string_view v) { c.solver.tol_residual_sup = csv::parse_double(v); }},
      {"solver.tol_step",
       [](StudyConfig& c, std::string_view v) { c.solver.tol_step = csv::parse_double(v); }},
      {"solver.tol_stationary",
       [](StudyConfig& c, std::string_view v) { c.solver.tol_stationary = csv::parse_double(v); }},
      {"solver.armijo_c",
       [](StudyConfig& c, std::string_view v) { c.solver.armijo_c = csv::parse_double(v); }},
      {"solver.lm_lambda0",
       [](StudyConfig& c, std::string_view v) { c.solver.lm_lambda0 = csv::parse_double(v); }},
      {"solver.rank_tol",
       [](StudyConfig& c, std::string_view v) { c.solver.rank_tol = csv::parse_double(v); }},
      {"expect.min_rate",
       [](StudyConfig& c, std::string_view v) { c.expect_min_rate = csv::parse_double(v); }},
      {"expect.max_rate_gap",
       [](StudyConfig& c, std::string_view v) { c.expect_max_rate_gap = csv::parse_double(v); }},
      {"expect.max_hoelder_slope",
       [](StudyConfig& c, std::string_view v) { c.expect_max_hoelder_slope = csv::parse_double(v); }},
      {"expect.monotone_error",
       [](StudyConfig& c, std::string_view v) { c.expect_monotone_error = to_bool(v); }},
      {"expect.error_bound_factor",
       [](StudyConfig& c, std::string_view v) { c.error_bound_factor = csv::parse_double(v); }},
      {"expect.stability_spread",
       [](StudyConfig& c, std::string_view v) { c.stability_spread_limit = csv::parse_double(v); }},
      {"output.dir", [](StudyConfig& c, std::string_view v) { c.output_dir = std::string(v); }},
      {"threads", [](StudyConfig& c, std::string_view v) { c.threads = to_int(v); }},
  };
  return table;
}

}  // namespace

StudyConfig parse_study_config(std::istream& is, const std::string& source) {
  StudyConfig cfg;
  std::set<std::string> seen;
  std::string section, raw;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigError(source + ":" + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(is, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = csv::trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = std::string(csv::trim(line.substr(1, line.size() - 2)));
      if (section.empty()) fail("empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value'");
    const std::string_view key_part = csv::trim(line.substr(0, eq));
    const std::string_view value = csv::trim(line.substr(eq + 1));
    if (key_part.empty()) fail("missing key");
    if (value.empty()) fail("missing value for '" + std::string(key_part) + "'");
    const std::string key = section.empty() ? std::string(key_part) : section + "." + std::string(key_part);

    const auto it = setters().find(key);
    if (it == setters().end()) fail("unknown key '" + key + "'");
    if (!seen.insert(key).second) fail("duplicate key '" + key + "'");
    try {
      it->second(cfg, value);
    } catch (const Error& e) {
      fail("bad value for '" + key + "': " + e.what());
    }
  }
  if (!seen.count("problem")) throw ConfigError(source + ": missing required key 'problem'");
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

StudyConfig load_study_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  return parse_study_config(in, path);
}

}  // namespace qlcoll
