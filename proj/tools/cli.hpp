#pragma once

// Command-line front end. Exit codes: 0 success, 2 invalid input or config,
// 3 numerical failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bvpgreen/bvpgreen.hpp"

namespace bvpgreen::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumerical = 3;

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path, std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

/// Writes to `path`, or to `fallback` when the path is empty.
template <class Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path, "cannot open output file");
  write(out);
}

struct Options {
  std::string config;
  std::optional<double> epsilon;
  std::optional<std::size_t> grid;
  std::optional<double> tol;
  std::string out;
  std::string json_out;
  std::optional<std::size_t> jobs;
};

inline FamilyScenario scenario_from(const Options& o, ScenarioConfig& cfg) {
  cfg = load_config(o.config);
  if (o.tol) {
    if (!(*o.tol >= LinearFlow::kMinTol && *o.tol <= LinearFlow::kMaxTol))
      throw ConfigError("--tol", "must lie in [1e-12, 1e-2]");
    cfg.tol = *o.tol;
  }
  if (o.jobs) cfg.jobs = std::max<std::size_t>(1, *o.jobs);
  return build_scenario(cfg);
}

inline double epsilon_or_throw(const Options& o) {
  if (!o.epsilon) throw ConfigError("--epsilon", "required");
  if (!(*o.epsilon >= 0.0)) throw ConfigError("--epsilon", "must be non-negative");
  return *o.epsilon;
}

inline int cmd_list(std::ostream& out) {
  for (const auto& e : registry_list()) {
    out << e.kind << ' ' << e.name << "\n    " << e.doc << '\n';
    for (const auto& p : e.params) out << "    param " << p.name << ": " << p.doc << '\n';
  }
  return kExitOk;
}

inline int cmd_sweep(const Options& o, std::ostream& out) {
  ScenarioConfig cfg;
  FamilyScenario sc = scenario_from(o, cfg);
  if (o.grid) {
    if (*o.grid < 2) throw ConfigError("--grid", "must be at least 2");
    sc.sup_grid = *o.grid;
    cfg.sup_grid = *o.grid;
  }
  const ConvergenceReport r = run_sweep(sc, SweepOptions{cfg.jobs, {}});
  const std::string csv_path = o.out.empty() ? cfg.output_csv : o.out;
  const std::string json_path = o.json_out.empty() ? cfg.output_json : o.json_out;
  emit(csv_path, out, [&](std::ostream& os) { write_report_csv(os, r); });
  if (!json_path.empty())
    emit(json_path, out, [&](std::ostream& os) { os << report_json(r, config_json(cfg)).dump(2) << '\n'; });
  if (!r.baseline_error.empty()) return kExitNumerical;
  for (const auto& row : r.rows)
    if (!row.error.empty()) return kExitNumerical;
  return kExitOk;
}

inline int cmd_green(const Options& o, std::ostream& out) {
  ScenarioConfig cfg;
  const FamilyScenario sc = scenario_from(o, cfg);
  const double eps = epsilon_or_throw(o);
  const std::size_t n = o.grid.value_or(cfg.green_grid);
  if (n < 1) throw ConfigError("--grid", "must be at least 1");
  const BVProblem p = sc.at(eps);
  const GreenMatrix G = green_matrix(p.A, p.U, p.interval, cfg.tol);
  const auto g = green_grid(p.interval, n, p.U.atom_locations());
  const GreenTable table = tabulate(G, g, g);
  emit(o.out, out, [&](std::ostream& os) { write_green_csv(os, table); });
  return kExitOk;
}

inline int cmd_solve(const Options& o, std::ostream& out) {
  ScenarioConfig cfg;
  const FamilyScenario sc = scenario_from(o, cfg);
  const double eps = epsilon_or_throw(o);
  const std::size_t n = o.grid.value_or(101);
  if (n < 2) throw ConfigError("--grid", "must be at least 2");
  const BVProblem p = sc.at(eps);
  const VecFn y = solve_bvp(p, cfg.tol);
  emit(o.out, out, [&](std::ostream& os) {
    os << 't';
    for (std::size_t i = 0; i < p.dim(); ++i) os << ",y_" << i + 1 << "_re,y_" << i + 1 << "_im";
    os << '\n';
    for (double t : uniform_grid(p.interval, n)) {
      const CVec v = y(t);
      os << format_double(t);
      for (std::size_t i = 0; i < v.dim(); ++i) os << ',' << format_double(v[i].real()) << ',' << format_double(v[i].imag());
      os << '\n';
    }
  });
  return kExitOk;
}

inline int cmd_check(const Options& o, std::ostream& out) {
  ScenarioConfig cfg;
  const FamilyScenario sc = scenario_from(o, cfg);
  std::vector<double> eps_list;
  if (o.epsilon) {
    eps_list.push_back(epsilon_or_throw(o));
  } else {
    eps_list.push_back(0.0);
    eps_list.insert(eps_list.end(), sc.epsilons.begin(), sc.epsilons.end());
  }
  bool all_ok = true;
  emit(o.out, out, [&](std::ostream& os) {
    os << "epsilon,det_re,det_im,abs_det,threshold,wellposed,error\n";
    for (double eps : eps_list) {
      os << format_double(eps);
      try {
        const BVProblem p = sc.at(eps);
        const WellposedCheck c = assess_wellposed(p.U, matrizant(p.A, p.interval, cfg.tol));
        all_ok = all_ok && c.ok();
        os << ',' << format_double(c.determinant.real()) << ',' << format_double(c.determinant.imag()) << ','
           << format_double(std::abs(c.determinant)) << ',' << format_double(c.threshold) << ','
           << (c.ok() ? "yes" : "no") << ",\n";
      } catch (const InvalidArgument&) {
        throw;
      } catch (const Error& e) {
        all_ok = false;
        os << ",,,,,no," << detail::csv_escape(e.what()) << '\n';
      }
    }
  });
  return all_ok ? kExitOk : kExitNumerical;
}

/// Parses argv and dispatches. Diagnostics go to `err`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Linear boundary value problems, Green matrices and eps-family convergence sweeps", "bvpgreen"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("config", o.config, "Scenario config (JSON)")->required();
    sub->add_option("--tol", o.tol, "Integrator tolerance (atol = rtol)");
    sub->add_option("--out", o.out, "Output path (default: stdout)");
  };
  auto* list = app.add_subcommand("list", "List registered families, coefficients, perturbations and densities");
  auto* sweep = app.add_subcommand("sweep", "Run the convergence sweep and write the CSV report");
  add_common(sweep);
  sweep->add_option("--grid", o.grid, "Sup-norm grid size");
  sweep->add_option("--jobs", o.jobs, "Worker threads");
  sweep->add_option("--json", o.json_out, "Also write the JSON report here");
  auto* green = app.add_subcommand("green", "Tabulate G(t, s; eps) on a midpoint grid");
  add_common(green);
  green->add_option("--epsilon", o.epsilon, "Parameter value (0 = limit problem)")->required();
  green->add_option("--grid", o.grid, "Points per axis");
  auto* solve = app.add_subcommand("solve", "Solve the BVP at one eps and write y on a uniform grid");
  add_common(solve);
  solve->add_option("--epsilon", o.epsilon, "Parameter value (0 = limit problem)")->required();
  solve->add_option("--grid", o.grid, "Trace points");
  auto* check = app.add_subcommand("check", "Well-posedness of the limit problem and each eps");
  add_common(check);
  check->add_option("--epsilon", o.epsilon, "Check only this parameter value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::ostringstream sink;
    app.exit(e, sink, err);
    return kExitInvalid;
  }

  try {
    if (*list) return cmd_list(out);
    if (*sweep) return cmd_sweep(o, out);
    if (*green) return cmd_green(o, out);
    if (*solve) return cmd_solve(o, out);
    if (*check) return cmd_check(o, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const DimensionMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitInvalid;
}

}  // namespace bvpgreen::cli
