#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "grushin/geometry.hpp"

namespace grushin {

enum class ExperimentKind { manufactured, sequence_study, regularity_sweep, scaling_check, variable_exponent, uniqueness_probe };

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::manufactured: return "manufactured";
    case ExperimentKind::sequence_study: return "sequence_study";
    case ExperimentKind::regularity_sweep: return "regularity_sweep";
    case ExperimentKind::scaling_check: return "scaling_check";
    case ExperimentKind::variable_exponent: return "variable_exponent";
    case ExperimentKind::uniqueness_probe: return "uniqueness_probe";
  }
  return "?";
}

enum class SourceKind { constant, radial_power, sine_product, indicator };

struct Box {
  double ax = 0.0, bx = 0.0, ay = 0.0, by = 0.0;
  Domain domain() const { return Domain(ax, bx, ay, by); }
};

struct GridSize {
  std::size_t nx = 0, ny = 0;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::manufactured;
  Box domain;
  std::vector<GridSize> grids;
  double lambda = 0.0;

  // Exponent: constant nu, or two zones (nu_inside on nu_zone, nu_outside elsewhere).
  std::optional<double> nu;
  bool two_zone = false;
  double nu_inside = 0.0;
  double nu_outside = 0.0;
  Box nu_zone;

  SourceKind source = SourceKind::constant;
  double source_value = 1.0;
  double source_gamma = 0.0;
  double source_center_x = 0.0;
  double source_center_y = 0.0;
  Box source_box;

  std::vector<double> n_list;
  double n = 0.0;
  double t = 16.0;
  double init_b_value = 1.0;
  std::optional<Box> window;
  std::vector<double> lp = {1.0, 2.0};

  double picard_tol = 1e-9;
  std::size_t picard_maxiter = 2000;
  std::optional<double> relaxation;
  double linear_tol = 1e-10;
  std::optional<std::size_t> linear_maxiter;

  double monotonicity_tol = 1e-10;
  double ratio_min = 3.0;
  double ratio_max = 5.0;
  double sup_change_threshold = 0.05;
  double scaling_threshold = 1e-3;
  double uniqueness_factor = 10.0;

  std::optional<std::string> output;
  std::optional<std::string> format;

  // key/value pairs in file order, echoed into reports
  std::vector<std::pair<std::string, std::string>> echo;
};

struct ConfigIssue {
  std::size_t line = 0;  // 0 when not tied to a line
  std::string key;
  std::string message;
};

class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<ConfigIssue> issues)
      : std::runtime_error(render(issues)), issues_(std::move(issues)) {}
  const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
  static std::string render(const std::vector<ConfigIssue>& issues) {
    std::ostringstream os;
    for (const auto& i : issues) {
      if (i.line) os << "line " << i.line << ": ";
      if (!i.key.empty()) os << i.key << ": ";
      os << i.message << '\n';
    }
    return os.str();
  }
  std::vector<ConfigIssue> issues_;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Splits on commas and whitespace.
inline std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::optional<double> to_real(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline std::optional<std::size_t> to_count(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
  try {
    return static_cast<std::size_t>(std::stoull(s));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "kind", "domain", "grid", "lambda", "nu", "nu_model", "nu_inside", "nu_outside", "nu_zone",
      "source", "source_value", "source_gamma", "source_center", "source_box", "n_list", "n", "t",
      "init_b_value", "window", "lp", "picard_tol", "picard_maxiter", "relaxation", "linear_tol",
      "linear_maxiter", "monotonicity_tol", "ratio_min", "ratio_max", "sup_change_threshold",
      "scaling_threshold", "uniqueness_factor", "output", "format"};
  return keys;
}

}  // namespace detail

/// Parses the flat `key = value` format: one pair per line, `#` starts a
/// comment, list values are separated by commas or blanks. All problems are
/// collected and thrown together as a ConfigError.
inline ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::vector<ConfigIssue> issues;
  std::map<std::string, std::pair<std::string, std::size_t>> kv;

  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back({lineno, "", "expected `key = value`"});
      continue;
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (!detail::known_keys().count(key)) {
      issues.push_back({lineno, key, "unknown key"});
      continue;
    }
    if (kv.count(key)) {
      issues.push_back({lineno, key, "duplicate key (first set on line " + std::to_string(kv[key].second) + ")"});
      continue;
    }
    if (value.empty()) {
      issues.push_back({lineno, key, "empty value"});
      continue;
    }
    kv[key] = {value, lineno};
    cfg.echo.emplace_back(key, value);
  }

  auto fail = [&](const std::string& key, const std::string& msg) {
    const auto it = kv.find(key);
    issues.push_back({it == kv.end() ? 0 : it->second.second, key, msg});
  };
  auto has = [&](const std::string& key) { return kv.count(key) > 0; };

  auto real = [&](const std::string& key, double& dst) {
    if (!has(key)) return false;
    if (auto v = detail::to_real(kv[key].first)) {
      dst = *v;
      return true;
    }
    fail(key, "expected a real number, got `" + kv[key].first + "`");
    return false;
  };
  auto count = [&](const std::string& key, std::size_t& dst) {
    if (!has(key)) return false;
    if (auto v = detail::to_count(kv[key].first)) {
      dst = *v;
      return true;
    }
    fail(key, "expected a nonnegative integer, got `" + kv[key].first + "`");
    return false;
  };
  auto reals = [&](const std::string& key, std::vector<double>& dst) {
    if (!has(key)) return false;
    std::vector<double> out;
    for (const auto& tok : detail::tokens(kv[key].first)) {
      auto v = detail::to_real(tok);
      if (!v) {
        fail(key, "expected a list of real numbers, got `" + tok + "`");
        return false;
      }
      out.push_back(*v);
    }
    dst = std::move(out);
    return true;
  };
  auto box = [&](const std::string& key, Box& dst) {
    std::vector<double> v;
    if (!reals(key, v)) return false;
    if (v.size() != 4) {
      fail(key, "expected four numbers `ax bx ay by`");
      return false;
    }
    if (!(v[0] < v[1] && v[2] < v[3])) {
      fail(key, "expected ax < bx and ay < by");
      return false;
    }
    dst = {v[0], v[1], v[2], v[3]};
    return true;
  };
  auto require = [&](const std::string& key, const char* why) {
    if (!has(key)) fail(key, std::string("required ") + why);
  };

  // kind
  if (!has("kind")) {
    fail("kind", "required");
    throw ConfigError(std::move(issues));
  }
  {
    static const std::map<std::string, ExperimentKind> kinds = {
        {"manufactured", ExperimentKind::manufactured},
        {"sequence_study", ExperimentKind::sequence_study},
        {"regularity_sweep", ExperimentKind::regularity_sweep},
        {"scaling_check", ExperimentKind::scaling_check},
        {"variable_exponent", ExperimentKind::variable_exponent},
        {"uniqueness_probe", ExperimentKind::uniqueness_probe}};
    const auto it = kinds.find(kv["kind"].first);
    if (it == kinds.end()) {
      fail("kind", "unknown kind `" + kv["kind"].first + "`");
      throw ConfigError(std::move(issues));
    }
    cfg.kind = it->second;
  }
  const ExperimentKind kind = cfg.kind;
  const bool ladder = kind == ExperimentKind::manufactured || kind == ExperimentKind::regularity_sweep;
  const bool sequence = kind == ExperimentKind::sequence_study || kind == ExperimentKind::variable_exponent;

  // domain and grids
  require("domain", "for every kind");
  box("domain", cfg.domain);
  require("grid", "for every kind");
  if (has("grid")) {
    for (const auto& tok : detail::tokens(kv["grid"].first)) {
      const auto x = tok.find('x');
      auto nx = detail::to_count(tok.substr(0, x));
      auto ny = x == std::string::npos ? nx : detail::to_count(tok.substr(x + 1));
      if (!nx || !ny) {
        fail("grid", "expected `N` or `NXxNY`, got `" + tok + "`");
        continue;
      }
      if (*nx < 3 || *ny < 3) {
        fail("grid", "grid sizes must be >= 3, got `" + tok + "`");
        continue;
      }
      cfg.grids.push_back({*nx, *ny});
    }
    if (ladder && cfg.grids.size() < 2) fail("grid", "this kind needs a refinement ladder of at least two sizes");
    if (!ladder && cfg.grids.size() > 1) fail("grid", "this kind takes a single grid size");
  }

  require("lambda", "for every kind");
  if (real("lambda", cfg.lambda) && !(cfg.lambda >= 0.0)) fail("lambda", "must be >= 0");

  // exponent
  std::string nu_model = has("nu_model") ? kv["nu_model"].first : "constant";
  if (kind == ExperimentKind::variable_exponent && !has("nu_model")) nu_model = "two_zone";
  if (nu_model == "constant") {
    if (kind != ExperimentKind::manufactured) require("nu", "(constant exponent)");
    for (const char* k : {"nu_inside", "nu_outside", "nu_zone"}) {
      if (has(k)) fail(k, "only valid with nu_model = two_zone");
    }
    double v = 0.0;
    if (real("nu", v)) {
      if (!(v > 0.0)) fail("nu", "must be > 0");
      cfg.nu = v;
    }
  } else if (nu_model == "two_zone") {
    cfg.two_zone = true;
    if (has("nu")) fail("nu", "not valid with nu_model = two_zone");
    require("nu_inside", "for nu_model = two_zone");
    require("nu_outside", "for nu_model = two_zone");
    require("nu_zone", "for nu_model = two_zone");
    if (real("nu_inside", cfg.nu_inside) && !(cfg.nu_inside > 0.0)) fail("nu_inside", "must be > 0");
    if (real("nu_outside", cfg.nu_outside) && !(cfg.nu_outside > 0.0)) fail("nu_outside", "must be > 0");
    box("nu_zone", cfg.nu_zone);
  } else {
    fail("nu_model", "expected `constant` or `two_zone`");
  }
  if (kind == ExperimentKind::variable_exponent && !cfg.two_zone) fail("nu_model", "variable_exponent needs two_zone");

  // source
  if (has("source")) {
    const std::string& s = kv["source"].first;
    if (s == "constant") cfg.source = SourceKind::constant;
    else if (s == "radial_power") cfg.source = SourceKind::radial_power;
    else if (s == "sine_product") cfg.source = SourceKind::sine_product;
    else if (s == "indicator") cfg.source = SourceKind::indicator;
    else fail("source", "expected constant, radial_power, sine_product or indicator");
    if (kind == ExperimentKind::manufactured) fail("source", "manufactured experiments use the built-in manufactured source");
  }
  if (real("source_value", cfg.source_value) && !(cfg.source_value > 0.0)) fail("source_value", "must be > 0");
  if (cfg.source == SourceKind::radial_power) {
    require("source_gamma", "for source = radial_power");
    if (real("source_gamma", cfg.source_gamma) && !(cfg.source_gamma >= 0.0)) fail("source_gamma", "must be >= 0");
    std::vector<double> c;
    if (reals("source_center", c)) {
      if (c.size() != 2) fail("source_center", "expected `x y`");
      else {
        cfg.source_center_x = c[0];
        cfg.source_center_y = c[1];
      }
    }
  } else {
    if (has("source_gamma")) fail("source_gamma", "only valid with source = radial_power");
    if (has("source_center")) fail("source_center", "only valid with source = radial_power");
  }
  if (cfg.source == SourceKind::indicator) {
    require("source_box", "for source = indicator");
    box("source_box", cfg.source_box);
  } else if (has("source_box")) {
    fail("source_box", "only valid with source = indicator");
  }

  // truncation levels
  if (sequence) {
    require("n_list", "for this kind");
    if (reals("n_list", cfg.n_list)) {
      if (cfg.n_list.empty()) fail("n_list", "must not be empty");
      for (double v : cfg.n_list) {
        if (!(v >= 1.0)) fail("n_list", "levels must be >= 1");
      }
      for (std::size_t k = 1; k < cfg.n_list.size(); ++k) {
        if (!(cfg.n_list[k] > cfg.n_list[k - 1])) {
          fail("n_list", "must be strictly increasing");
          break;
        }
      }
    }
    if (has("n")) fail("n", "use n_list for this kind");
  } else if (kind != ExperimentKind::manufactured) {
    require("n", "for this kind");
    if (real("n", cfg.n) && !(cfg.n >= 1.0)) fail("n", "must be >= 1");
    if (has("n_list")) fail("n_list", "use n for this kind");
  } else {
    for (const char* k : {"n", "n_list"}) {
      if (has(k)) fail(k, "not used by manufactured experiments");
    }
  }
  if (real("t", cfg.t)) {
    if (kind != ExperimentKind::scaling_check) fail("t", "only valid for scaling_check");
    else if (!(cfg.t > 0.0)) fail("t", "must be > 0");
  }
  if (kind == ExperimentKind::scaling_check && cfg.two_zone) fail("nu_model", "scaling_check needs a constant exponent");
  if (real("init_b_value", cfg.init_b_value) && !(cfg.init_b_value >= 0.0)) fail("init_b_value", "must be >= 0");

  if (has("window")) {
    Box w;
    if (box("window", w)) cfg.window = w;
  }
  if (reals("lp", cfg.lp)) {
    for (double p : cfg.lp) {
      if (!(p >= 1.0)) fail("lp", "exponents must be >= 1");
    }
  }

  // solver controls
  if (real("picard_tol", cfg.picard_tol) && !(cfg.picard_tol > 0.0)) fail("picard_tol", "must be > 0");
  if (count("picard_maxiter", cfg.picard_maxiter) && cfg.picard_maxiter == 0) fail("picard_maxiter", "must be >= 1");
  double omega = 0.0;
  if (real("relaxation", omega)) {
    if (!(omega > 0.0 && omega <= 1.0)) fail("relaxation", "must lie in (0, 1]");
    cfg.relaxation = omega;
  }
  if (real("linear_tol", cfg.linear_tol) && !(cfg.linear_tol > 0.0)) fail("linear_tol", "must be > 0");
  std::size_t lmax = 0;
  if (count("linear_maxiter", lmax)) {
    if (lmax == 0) fail("linear_maxiter", "must be >= 1");
    cfg.linear_maxiter = lmax;
  }

  // thresholds
  real("monotonicity_tol", cfg.monotonicity_tol);
  real("ratio_min", cfg.ratio_min);
  real("ratio_max", cfg.ratio_max);
  if (!(cfg.ratio_min < cfg.ratio_max)) fail("ratio_max", "must exceed ratio_min");
  if (real("sup_change_threshold", cfg.sup_change_threshold) && !(cfg.sup_change_threshold > 0.0)) {
    fail("sup_change_threshold", "must be > 0");
  }
  if (real("scaling_threshold", cfg.scaling_threshold) && !(cfg.scaling_threshold > 0.0)) {
    fail("scaling_threshold", "must be > 0");
  }
  if (real("uniqueness_factor", cfg.uniqueness_factor) && !(cfg.uniqueness_factor > 0.0)) {
    fail("uniqueness_factor", "must be > 0");
  }

  if (has("output")) cfg.output = kv["output"].first;
  if (has("format")) {
    const std::string& f = kv["format"].first;
    if (f != "csv" && f != "json") fail("format", "expected csv or json");
    cfg.format = f;
  }

  if (!issues.empty()) {
    std::stable_sort(issues.begin(), issues.end(),
                     [](const ConfigIssue& a, const ConfigIssue& b) { return a.line < b.line; });
    throw ConfigError(std::move(issues));
  }
  return cfg;
}

}  // namespace grushin
