#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "grushin/experiment.hpp"

namespace grushin {

enum class ReportFormat { csv, json };

/// 17 significant digits, locale independent.
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_real(v); }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string out = "\"";
      for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
      }
      return out + "\"";
    }
  };
  return std::visit(Visitor{}, c);
}

/// Header row plus one line per row, LF endings.
inline void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << t.columns[k];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << format_cell(row[k]);
    os << '\n';
  }
}

inline Table verdict_table(const ExperimentReport& rep) {
  Table t{"verdicts", {"name", "lhs", "rhs", "pass"}, {}};
  for (const auto& v : rep.verdicts) t.rows.push_back({v.name, v.lhs, v.rhs, static_cast<long long>(v.pass)});
  return t;
}

inline nlohmann::ordered_json to_json(const ExperimentReport& rep) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["kind"] = rep.kind;
  ordered_json config = ordered_json::object();
  for (const auto& [k, v] : rep.config) config[k] = v;
  doc["config"] = config;
  ordered_json tables = ordered_json::array();
  for (const auto& t : rep.tables) {
    ordered_json jt;
    jt["name"] = t.name;
    jt["columns"] = t.columns;
    ordered_json rows = ordered_json::array();
    for (const auto& row : t.rows) {
      ordered_json jr = ordered_json::array();
      for (const auto& c : row) {
        if (std::holds_alternative<std::monostate>(c)) jr.push_back(nullptr);
        else if (const auto* i = std::get_if<long long>(&c)) jr.push_back(*i);
        else if (const auto* d = std::get_if<double>(&c)) jr.push_back(*d);
        else jr.push_back(std::get<std::string>(c));
      }
      rows.push_back(std::move(jr));
    }
    jt["rows"] = std::move(rows);
    tables.push_back(std::move(jt));
  }
  doc["tables"] = std::move(tables);
  ordered_json verdicts = ordered_json::array();
  for (const auto& v : rep.verdicts) {
    verdicts.push_back(ordered_json{{"name", v.name}, {"lhs", v.lhs}, {"rhs", v.rhs}, {"pass", v.pass}});
  }
  doc["verdicts"] = std::move(verdicts);
  doc["errors"] = rep.errors;
  doc["pass"] = rep.pass();
  return doc;
}

inline ExperimentReport report_from_json(const std::string& text) {
  const auto doc = nlohmann::ordered_json::parse(text);
  ExperimentReport rep;
  rep.kind = doc.at("kind").get<std::string>();
  for (const auto& [k, v] : doc.at("config").items()) rep.config.emplace_back(k, v.get<std::string>());
  for (const auto& jt : doc.at("tables")) {
    Table t;
    t.name = jt.at("name").get<std::string>();
    t.columns = jt.at("columns").get<std::vector<std::string>>();
    for (const auto& jr : jt.at("rows")) {
      std::vector<Cell> row;
      for (const auto& c : jr) {
        if (c.is_null()) row.emplace_back(std::monostate{});
        else if (c.is_number_integer()) row.emplace_back(c.get<long long>());
        else if (c.is_number_float()) row.emplace_back(c.get<double>());
        else row.emplace_back(c.get<std::string>());
      }
      t.rows.push_back(std::move(row));
    }
    rep.tables.push_back(std::move(t));
  }
  for (const auto& jv : doc.at("verdicts")) {
    rep.verdicts.push_back(
        {jv.at("name").get<std::string>(), jv.at("lhs").get<double>(), jv.at("rhs").get<double>(), jv.at("pass").get<bool>()});
  }
  rep.errors = doc.at("errors").get<std::vector<std::string>>();
  return rep;
}

/// Paths written for a CSV report rooted at `path`: one file per table plus
/// the verdict table, named <stem>_<table>.csv next to `path`.
inline std::vector<std::filesystem::path> csv_paths(const ExperimentReport& rep, const std::filesystem::path& path) {
  std::filesystem::path stem = path;
  if (stem.extension() == ".csv") stem.replace_extension();
  std::vector<std::filesystem::path> out;
  for (const auto& t : rep.tables) out.emplace_back(stem.string() + "_" + t.name + ".csv");
  out.emplace_back(stem.string() + "_verdicts.csv");
  return out;
}

inline void emit_report(const ExperimentReport& rep, ReportFormat format, const std::filesystem::path& path) {
  auto open = [](const std::filesystem::path& p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("emit_report: cannot open " + p.string());
    return os;
  };
  if (format == ReportFormat::json) {
    auto os = open(path);
    os << to_json(rep).dump(2) << '\n';
    if (!os) throw std::runtime_error("emit_report: write failed for " + path.string());
    return;
  }
  const auto paths = csv_paths(rep, path);
  for (std::size_t k = 0; k < paths.size(); ++k) {
    auto os = open(paths[k]);
    write_csv(os, k < rep.tables.size() ? rep.tables[k] : verdict_table(rep));
    if (!os) throw std::runtime_error("emit_report: write failed for " + paths[k].string());
  }
}

/// Writes every table to one stream, each preceded by a `# table: <name>` line.
inline void print_csv(std::ostream& os, const ExperimentReport& rep) {
  for (const auto& t : rep.tables) {
    os << "# table: " << t.name << '\n';
    write_csv(os, t);
  }
  os << "# table: verdicts\n";
  write_csv(os, verdict_table(rep));
}

}  // namespace grushin
