#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hmz/experiments.hpp"

namespace hmz {

/// Plain numeric table for the non-experiment commands.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// %.17g: enough digits to round-trip every double, independent of locale.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + t.columns[c];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + format_double(row[c]);
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json to_json(const Table& t) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r;
    for (std::size_t c = 0; c < row.size(); ++c) r[t.columns[c]] = row[c];
    rows.push_back(std::move(r));
  }
  return rows;
}

inline Table rows_table(const ExperimentReport& r) {
  Table t;
  t.columns.push_back("n");
  if (!r.rows.empty())
    for (const auto& m : r.rows.front().values) t.columns.push_back(m.name);
  for (const auto& row : r.rows) {
    std::vector<double> v{row.n};
    for (const auto& m : row.values) v.push_back(m.value);
    t.rows.push_back(std::move(v));
  }
  return t;
}

inline std::string to_csv(const ExperimentReport& r) { return to_csv(rows_table(r)); }

inline nlohmann::ordered_json to_json(const ExperimentReport& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  auto& params = j["params"] = nlohmann::ordered_json::object();
  for (const auto& p : r.params) {
    const auto* x = std::get_if<double>(&p.value);
    if (x && std::isinf(*x))
      params[p.name] = *x > 0 ? "inf" : "-inf";  // JSON has no infinity
    else
      std::visit([&](const auto& v) { params[p.name] = v; }, p.value);
  }
  j["rows"] = to_json(rows_table(r));
  auto& summary = j["summary"] = nlohmann::ordered_json::object();
  for (const auto& m : r.summary) summary[m.name] = m.value;
  auto& fits = j["fits"] = nlohmann::ordered_json::array();
  for (const auto& f : r.fits) {
    fits.push_back({{"name", f.name},
                    {"window", f.window == FitWindow::top_half ? "top_half" : "all"},
                    {"points", f.count()},
                    {"slope", f.slope},
                    {"intercept", f.intercept},
                    {"residual", f.max_residual},
                    {"slope_stderr", f.slope_stderr},
                    {"slope_ci95", f.slope_ci95}});
  }
  auto& verdicts = j["verdicts"] = nlohmann::ordered_json::array();
  for (const auto& v : r.verdicts) verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  j["warnings"] = r.warnings;
  return j;
}

}  // namespace hmz
