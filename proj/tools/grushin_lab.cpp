// Command-line runner for configured experiments.
//
//   grushin_lab run <config> [--out <path>] [--format csv|json]
//   grushin_lab check <config>
//   grushin_lab exponents --m M --lambda L --nu NU --r R --case CASE
//
// Exit status: 0 all verdicts pass, 1 some verdict failed or a run errored,
// 2 usage, configuration or I/O error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "grushin/grushin.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_value(const char* key, double v) { std::cout << key << " = " << grushin::format_real(v) << '\n'; }

int run_exponents(int m, double lambda, double nu, double r, const std::string& case_name) {
  using namespace grushin;
  const auto c = parse_regularity_case(case_name);
  if (!c) {
    std::cerr << "exponents: unknown case `" << case_name << "` (nu_eq_1, nu_gt_1, nu_lt_1, sobolev_q)\n";
    return 2;
  }
  const double Q = homogeneous_dimension(m, lambda);
  print_value("Q", Q);
  if (Q > 2.0) print_value("two_star", critical_exponent(Q));
  else std::cout << "two_star = undefined\n";
  print_value("holder_conjugate_r", holder_conjugate(r));
  if (*c == RegularityCase::nu_lt_1 && Q > 2.0 && nu > 0.0 && nu < 1.0) {
    print_value("r_min", sublinear_source_threshold(nu, Q));
  }
  if (*c == RegularityCase::sobolev_q && nu > 0.0) print_value("r_max", sobolev_source_limit(nu, Q));
  const RegularityExponent e = regularity_exponent(*c, nu, r, Q);
  if (e.bounded) std::cout << to_string(*c) << " = bounded\n";
  else print_value(to_string(*c), e.value);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the singular Grushin problem -Delta_lambda u = f/u^nu"};
  app.require_subcommand(1);

  std::string config_path, out_path, format;
  auto* run = app.add_subcommand("run", "run a configured experiment");
  run->add_option("config", config_path, "experiment config file")->required();
  run->add_option("--out", out_path, "output path (CSV: <stem>_<table>.csv per table)");
  run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::string check_path;
  auto* check = app.add_subcommand("check", "parse and validate a config");
  check->add_option("config", check_path, "experiment config file")->required();

  int m = 1;
  double lambda = 1.0, nu = 1.0, r = 1.0;
  std::string case_name = "nu_eq_1";
  auto* exps = app.add_subcommand("exponents", "print exponent values");
  exps->add_option("--m", m, "number of degenerate directions")->check(CLI::PositiveNumber);
  exps->add_option("--lambda", lambda, "degeneracy exponent")->check(CLI::NonNegativeNumber);
  exps->add_option("--nu", nu, "singular exponent");
  exps->add_option("--r", r, "integrability of the source");
  exps->add_option("--case", case_name, "nu_eq_1 | nu_gt_1 | nu_lt_1 | sobolev_q");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*exps) return run_exponents(m, lambda, nu, r, case_name);

    if (*check) {
      const auto cfg = grushin::parse_config(read_file(check_path));
      std::cout << check_path << ": ok (" << grushin::to_string(cfg.kind) << ")\n";
      return 0;
    }

    const auto cfg = grushin::parse_config(read_file(config_path));
    if (format.empty()) format = cfg.format.value_or("csv");
    if (out_path.empty() && cfg.output) out_path = *cfg.output;

    const auto report = grushin::run_experiment(cfg);
    const auto fmt = format == "json" ? grushin::ReportFormat::json : grushin::ReportFormat::csv;
    if (out_path.empty()) {
      if (fmt == grushin::ReportFormat::json) std::cout << grushin::to_json(report).dump(2) << '\n';
      else grushin::print_csv(std::cout, report);
    } else {
      grushin::emit_report(report, fmt, out_path);
    }
    for (const auto& v : report.verdicts) {
      if (!v.pass) std::cerr << "FAIL " << v.name << ": " << grushin::format_real(v.lhs) << " vs " << grushin::format_real(v.rhs) << '\n';
    }
    for (const auto& e : report.errors) std::cerr << "ERROR " << e << '\n';
    return report.pass() ? 0 : 1;
  } catch (const grushin::ConfigError& e) {
    std::cerr << e.what();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
