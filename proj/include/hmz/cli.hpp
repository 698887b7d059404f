#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <locale>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hmz/errors.hpp"
#include "hmz/experiments.hpp"
#include "hmz/report.hpp"

namespace hmz::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_numerical = 1;
inline constexpr int exit_usage = 2;

struct CliConfig {
  std::string subcommand;
  std::size_t n = 16;
  double p = 2.0;
  std::string q = "2";
  std::size_t d = 1;
  double delta = 0.9;
  double alpha = 0.2;
  std::size_t trials = 4;
  std::uint64_t seed = 2024;
  std::vector<std::size_t> n_list;
  std::vector<std::size_t> m_list;
  std::vector<std::size_t> sizes{16, 32, 64, 128, 256, 512, 1024};
  std::vector<double> t_list;
  std::size_t points = 201;
  std::string function = "gauss";
  std::string values;
  std::string format = "json";
  std::string output;
  std::size_t threads = 0;

  double q_value() const {
    std::string s = q;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "inf" || s == "infinity") return infinity;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || used == 0) throw usage_error("--q must be a number >= 1 or 'inf'");
    return v;
  }
  NormSpec spec() const { return {d, q_value(), p}; }
  std::vector<std::size_t> n_list_or_default() const { return n_list.empty() ? default_n_list() : n_list; }
};

/// A test function in both forms: f itself and g = f e^{-t^2/2}, each spread
/// evenly over d components with unit l_2 direction.
struct NamedFunction {
  FunctionHandle plain;
  FunctionHandle weighted;
};

inline FunctionHandle spread(std::function<double(double)> f, std::size_t d, Decay decay) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  return {[f = std::move(f), scale](double t, std::span<double> out) {
            const double v = f(t) * scale;
            std::fill(out.begin(), out.end(), v);
          },
          d, decay};
}

inline NamedFunction named_function(const std::string& name, std::size_t d) {
  if (name == "gauss")
    return {spread([](double t) { return std::exp(-t * t); }, d, Decay::gaussian),
            spread([](double t) { return std::exp(-1.5 * t * t); }, d, Decay::gaussian)};
  if (name == "lorentz")
    return {spread([](double t) { return 1.0 / (1.0 + t * t); }, d, Decay::algebraic),
            spread([](double t) { return std::exp(-0.5 * t * t) / (1.0 + t * t); }, d, Decay::gaussian)};
  if (name == "kink")
    return {spread([](double t) { return std::exp(-std::abs(t)); }, d, Decay::algebraic),
            spread([](double t) { return std::exp(-std::abs(t) - 0.5 * t * t); }, d, Decay::gaussian)};
  if (name.rfind("hermite:", 0) == 0) {
    std::size_t k = 0;
    try {
      std::size_t used = 0;
      k = std::stoul(name.substr(8), &used);
      if (used != name.size() - 8) throw usage_error("");
    } catch (const std::exception&) {
      throw usage_error("--function hermite:K needs a non-negative integer K");
    }
    auto h = [k](double t) { return hermite_function(k, t); };
    return {spread(h, d, Decay::gaussian), spread(h, d, Decay::gaussian)};
  }
  throw usage_error("unknown --function '" + name + "' (gauss, lorentz, kink, hermite:K)");
}

namespace detail {

/// Node values f(t_j) from CSV: one row per node in `nodes` order, one column
/// per component, optional non-numeric header line.
inline std::pair<std::size_t, std::vector<double>> read_node_values(std::istream& in, std::size_t rows) {
  std::vector<double> flat;
  std::size_t width = 0;
  std::size_t count = 0;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> fields;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      std::istringstream cs(cell);
      cs.imbue(std::locale::classic());
      double v = 0.0;
      if (!(cs >> v) || !(cs >> std::ws).eof()) {
        numeric = false;
        break;
      }
      fields.push_back(v);
    }
    if (!numeric) {
      if (count == 0 && flat.empty() && lineno == 1) continue;  // header
      throw usage_error("--values line " + std::to_string(lineno) + " is not numeric");
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width) throw shape_error("--values line " + std::to_string(lineno) + " has a different width");
    flat.insert(flat.end(), fields.begin(), fields.end());
    ++count;
  }
  if (count != rows)
    throw shape_error("--values holds " + std::to_string(count) + " rows, the rule has " + std::to_string(rows) + " nodes");
  return {width, std::move(flat)};
}

inline void validate(const CliConfig& c) {
  if (!(c.p >= 1.0)) throw usage_error("--p must be at least 1");
  if (!(c.q_value() >= 1.0)) throw usage_error("--q must be at least 1");
  if (c.d == 0) throw usage_error("--d must be at least 1");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw usage_error("--delta must lie in (0, 1)");
  if (!(c.alpha >= 0.0) || !std::isfinite(c.alpha)) throw usage_error("--alpha must be finite and >= 0");
  if (c.trials == 0) throw usage_error("--trials must be at least 1");
  if (c.n > max_rule_degree) throw usage_error("--n exceeds " + std::to_string(max_rule_degree));
  for (std::size_t n : c.n_list)
    if (n > max_rule_degree) throw usage_error("--n-list entry exceeds " + std::to_string(max_rule_degree));
  if (c.format != "json" && c.format != "csv") throw usage_error("--format must be csv or json");
  if (c.points < 2) throw usage_error("--points must be at least 2");
}

struct Output {
  std::vector<ExperimentReport> reports;
  std::optional<Table> table;
  nlohmann::ordered_json table_params = nlohmann::ordered_json::object();
};

inline std::string render(const CliConfig& c, const Output& o) {
  if (c.format == "csv") {
    if (o.table) return to_csv(*o.table);
    if (o.reports.size() == 1) return to_csv(o.reports.front());
    std::string out;
    for (std::size_t i = 0; i < o.reports.size(); ++i) {
      if (i) out += '\n';
      out += "# " + o.reports[i].id + '\n' + to_csv(o.reports[i]);
    }
    return out;
  }
  nlohmann::ordered_json j;
  if (o.table) {
    j["command"] = c.subcommand;
    j["params"] = o.table_params;
    j["rows"] = to_json(*o.table);
  } else if (o.reports.size() == 1) {
    j = to_json(o.reports.front());
  } else {
    j = nlohmann::ordered_json::array();
    for (const auto& r : o.reports) j.push_back(to_json(r));
  }
  return j.dump(2) + '\n';
}

inline Output dispatch(const CliConfig& c) {
  Output o;
  const auto& cmd = c.subcommand;
  if (cmd == "nodes") {
    const auto rule = build_rule(c.n);
    Table t{{"j", "t", "lambda", "log_lambda", "mu", "derivative"}, {}};
    for (std::size_t j = 0; j < rule.size(); ++j)
      t.rows.push_back({static_cast<double>(j), rule.node(j), rule.lambda()[j], rule.log_lambda()[j], rule.mu(j),
                        rule.derivatives()[j]});
    o.table = std::move(t);
    o.table_params = {{"n", c.n}};
  } else if (cmd == "eval") {
    std::vector<double> ts = c.t_list;
    if (ts.empty())
      for (int i = 0; i <= 20; ++i) ts.push_back(-5.0 + 0.5 * i);
    Table t{{"t", "value", "derivative"}, {}};
    for (double x : ts) {
      const auto v = eval_hermite_pair(c.n, x);
      t.rows.push_back({x, v.value, v.derivative});
    }
    o.table = std::move(t);
    o.table_params = {{"n", c.n}};
  } else if (cmd == "interp") {
    const auto rule = make_rule(c.n);
    const double R = rule->sqrt_N() + 2.0;
    auto grid = [&](std::size_t i) {
      return -R + 2.0 * R * static_cast<double>(i) / static_cast<double>(c.points - 1);
    };
    if (!c.values.empty()) {
      std::ifstream file(c.values);
      if (!file) throw usage_error("cannot read --values file " + c.values);
      auto [d, raw] = read_node_values(file, rule->size());
      const auto ig = interpolate(rule, NodeValues::from_raw(*rule, d, std::move(raw)));
      Table t{{"t"}, {}};
      for (std::size_t a = 0; a < d; ++a) t.columns.push_back(d == 1 ? "g" : "g_" + std::to_string(a));
      for (std::size_t i = 0; i < c.points; ++i) {
        const double x = grid(i);
        const auto v = ig(x);
        std::vector<double> row{x};
        const auto comps = v.components();
        row.insert(row.end(), comps.begin(), comps.end());
        t.rows.push_back(std::move(row));
      }
      o.table = std::move(t);
      o.table_params = {{"n", c.n}, {"values", c.values}, {"points", c.points}};
    } else {
      const auto g = named_function(c.function, 1).weighted;
      const auto ig = interpolate(rule, sample_weighted_at_nodes(g, *rule));
      Table t{{"t", "weighted_f", "g"}, {}};
      for (std::size_t i = 0; i < c.points; ++i) {
        const double x = grid(i);
        t.rows.push_back({x, g(x)[0], ig(x)[0]});
      }
      o.table = std::move(t);
      o.table_params = {{"n", c.n}, {"function", c.function}, {"points", c.points}};
    }
  } else if (cmd == "mz-ratio") {
    o.reports.push_back(mz_ratio_sweep(c.spec(), c.n_list_or_default(), c.trials, c.seed, c.threads));
  } else if (cmd == "growth") {
    o.reports.push_back(hermite_norm_growth(c.p, c.n_list_or_default(), c.threads));
    o.reports.push_back(mz_witness_hn(c.p, c.n_list_or_default(), c.threads));
  } else if (cmd == "counterexample") {
    o.reports.push_back(counterexample_growth(c.p, c.alpha, c.n_list_or_default(), c.threads));
  } else if (cmd == "interp-convergence") {
    const auto f = named_function(c.function, c.d);
    auto r = interpolation_convergence(f.weighted, c.spec(), c.alpha, c.n_list_or_default(), c.threads);
    r.params.push_back({"function", c.function});
    o.reports.push_back(std::move(r));
  } else if (cmd == "expansion-convergence") {
    const auto f = named_function(c.function, c.d);
    auto r = expansion_convergence(f.plain, c.spec(), c.n_list_or_default(), c.threads);
    r.params.push_back({"function", c.function});
    o.reports.push_back(std::move(r));
  } else if (cmd == "kernel-bound") {
    o.reports.push_back(kernel_bound(c.m_list.empty() ? default_m_list() : c.m_list, c.delta, c.threads));
    o.reports.push_back(kernel_diagonal_growth(c.n_list_or_default(), c.threads));
  } else if (cmd == "hilbert") {
    o.reports.push_back(hilbert_section_deviation(c.n_list_or_default(), c.threads));
    o.reports.push_back(hilbert_matrix_growth(c.p, c.sizes, c.threads));
  } else {
    throw usage_error("unknown subcommand '" + cmd + "'");
  }
  return o;
}

inline void write_output(const CliConfig& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::filesystem::path path(c.output);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("HMZ_OUTPUT_DIR"); dir && *dir) path = std::filesystem::path(dir) / path;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file " + path.string());
  file << text;
  if (!file) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace detail

inline void add_options(CLI::App& sub, CliConfig& c, const std::vector<std::string>& names) {
  auto has = [&](const char* s) { return std::find(names.begin(), names.end(), s) != names.end(); };
  if (has("n")) sub.add_option("--n", c.n, "degree n (rule has n+1 nodes)")->capture_default_str();
  if (has("p")) sub.add_option("--p", c.p, "exponent p >= 1")->capture_default_str();
  if (has("q")) sub.add_option("--q", c.q, "component norm l_q, a number >= 1 or inf")->capture_default_str();
  if (has("d")) sub.add_option("--d", c.d, "dimension of X = l_q^d")->capture_default_str();
  if (has("delta")) sub.add_option("--delta", c.delta, "restriction |t_j| <= delta sqrt(N), in (0, 1)")->capture_default_str();
  if (has("alpha")) sub.add_option("--alpha", c.alpha, "decay exponent alpha")->capture_default_str();
  if (has("trials")) sub.add_option("--trials", c.trials, "random polynomials per n")->capture_default_str();
  if (has("seed")) sub.add_option("--seed", c.seed, "random seed")->capture_default_str();
  if (has("n-list")) sub.add_option("--n-list", c.n_list, "ascending comma-separated degrees")->delimiter(',');
  if (has("m-list")) sub.add_option("--m-list", c.m_list, "ascending comma-separated kernel orders")->delimiter(',');
  if (has("sizes")) sub.add_option("--sizes", c.sizes, "ascending comma-separated matrix sizes")->delimiter(',');
  if (has("t")) sub.add_option("--t", c.t_list, "comma-separated abscissae")->delimiter(',');
  if (has("points")) sub.add_option("--points", c.points, "number of output abscissae")->capture_default_str();
  if (has("function"))
    sub.add_option("--function", c.function, "gauss, lorentz, kink or hermite:K")->capture_default_str();
  if (has("values"))
    sub.add_option("--values", c.values, "CSV of f(t_j), one row per node in `nodes` order, one column per component");
  sub.add_option("--format", c.format, "csv or json")->capture_default_str();
  sub.add_option("--output", c.output, "output file (relative paths resolve against $HMZ_OUTPUT_DIR)");
  sub.add_option("--threads", c.threads, "worker threads, 0 = hardware count")->capture_default_str();
}

/// Parses `args` (without the program name), runs the command and writes the
/// result. Returns 0, 1 (numerical failure) or 2 (usage error).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig c;
  CLI::App app{"Hermite interpolation, quadrature and Marcinkiewicz-Zygmund experiments", "hmz"};
  app.require_subcommand(1);
  struct Spec {
    const char* name;
    const char* help;
    std::vector<std::string> options;
  };
  const std::vector<Spec> specs{
      {"nodes", "Gauss-Hermite nodes and weights", {"n"}},
      {"eval", "Hermite function H_n and its derivative", {"n", "t"}},
      {"interp", "weighted interpolant g = e^{-t^2/2} I_n f on a grid", {"n", "function", "values", "points"}},
      {"mz-ratio", "continuous vs discrete norm ratios", {"p", "q", "d", "trials", "seed", "n-list"}},
      {"growth", "||H_n||_p and D_p(h_n) growth", {"p", "n-list"}},
      {"counterexample", "divergent interpolation data", {"p", "alpha", "n-list"}},
      {"interp-convergence", "||f - I_n f|| in the weighted norm", {"p", "q", "d", "alpha", "function", "n-list"}},
      {"expansion-convergence", "||f - P_n f|| in L_p", {"p", "q", "d", "function", "n-list"}},
      {"kernel-bound", "Cesaro kernel L_1 scans and the diagonal", {"delta", "m-list", "n-list"}},
      {"hilbert", "node-difference matrices and the shifted Hilbert matrix", {"p", "n-list", "sizes"}},
  };
  for (const auto& s : specs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add_options(*sub, c, s.options);
    sub->callback([&c, name = std::string(s.name)] { c.subcommand = name; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }

  try {
    detail::validate(c);
    const auto output = detail::dispatch(c);
    detail::write_output(c, detail::render(c, output), out);
    return exit_ok;
  } catch (const numerical_error& e) {
    err << "numerical failure in " << c.subcommand << ": " << e.what() << "\n";
    return exit_numerical;
  } catch (const std::invalid_argument& e) {  // usage_error, shape_error
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::length_error& e) {  // capacity_error
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "failure in " << c.subcommand << ": " << e.what() << "\n";
    return exit_numerical;
  }
}

}  // namespace hmz::cli
