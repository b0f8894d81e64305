#pragma once

// Parameter sweeps over BVP families and the diagnostics attached to each
// parameter value: matrizant closeness Z -> I, the Levin integrals, the
// Kiguradze condition quantities, and convergence of solutions and Green
// matrices toward the eps = 0 problem.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bvpgreen/boundary.hpp"
#include "bvpgreen/errors.hpp"
#include "bvpgreen/green.hpp"
#include "bvpgreen/linalg.hpp"
#include "bvpgreen/ode.hpp"

namespace bvpgreen {

/// Half-decade sweep from 1e-1 down to 1e-4.
inline const std::vector<double> kDefaultEpsilons = {1e-1, 3.16e-2, 1e-2, 3.16e-3, 1e-3, 3.16e-4, 1e-4};

struct FamilyScenario {
  std::string name;
  Interval interval;
  std::size_t dim = 1;
  std::vector<double> epsilons = kDefaultEpsilons;
  /// eps -> problem; eps = 0 is the limit problem.
  std::function<BVProblem(double)> family;
  double tol = 1e-8;
  std::size_t sup_grid = kDefaultSupGrid;
  std::size_t green_grid = kDefaultGreenGrid;
  /// Optional eps -> A(eps) - A(0) in closed form; when empty the difference is
  /// formed from `family`.
  std::function<CoeffFn(double)> perturbation;
  /// Probe set for the strong-convergence surrogate; empty means default_probes.
  std::vector<VecFn> probes;

  BVProblem baseline() const { return family(0.0); }
  BVProblem at(double eps) const { return family(eps); }

  std::vector<VecFn> probe_set() const { return probes.empty() ? default_probes(dim, interval) : probes; }

  /// Checks shapes and that the limit problem is well-posed.
  void validate() const {
    interval.validate();
    if (!family) throw InvalidArgument("scenario has no family evaluator");
    if (epsilons.empty()) throw InvalidArgument("scenario needs at least one epsilon");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
      if (!(epsilons[i] > 0.0) || !std::isfinite(epsilons[i])) throw InvalidArgument("epsilons must be positive");
      if (i > 0 && !(epsilons[i] < epsilons[i - 1])) throw InvalidArgument("epsilons must be strictly decreasing");
    }
    if (sup_grid < 2) throw InvalidArgument("sup grid needs at least 2 points");
    if (green_grid < 1) throw InvalidArgument("green grid needs at least 1 point");
    const BVProblem base = baseline();
    base.validate();
    if (base.dim() != dim || !(base.interval == interval))
      throw InvalidArgument("baseline problem does not match scenario shape");
    auto check = assess_wellposed(base.U, matrizant(base.A, interval, tol));
    if (!check.ok()) throw NonUnique("limit problem violates well-posedness: det [U Y] ~ 0");
  }
};

/// R(.; eps) = A(.; eps) - A(.; 0).
inline CoeffFn coefficient_perturbation(const FamilyScenario& sc, double eps) {
  if (sc.perturbation) return sc.perturbation(eps);
  return difference(sc.at(eps).A, sc.baseline().A);
}

/// Grid fine enough to resolve the oscillation hint at 20 points per scale.
inline std::size_t resolved_grid_size(const Interval& iv, std::optional<double> scale, std::size_t base) {
  if (!scale) return base;
  const double n = std::ceil(LinearFlow::kStepsPerWavelength * iv.length() / *scale) + 1.0;
  return std::max(base, static_cast<std::size_t>(std::min(n, 5e6)));
}

/// sup_t |Z(t) - I| for Z' = R Z, Z(a) = I, over the integrator nodes and a
/// uniform grid.
inline double sup_Z_minus_I(const CoeffFn& R, double tol, std::size_t grid) {
  const Matrizant Z = matrizant(R, R.domain, tol);
  const CMat id = CMat::identity(R.dim);
  const auto points = merged_grid(R.domain, grid, Z.nodes());
  return refined_sup([&](double t) { return Z(t) - id; }, points);
}

inline std::vector<double> class_M_diagnostic(const FamilyScenario& sc, double tol) {
  std::vector<double> out;
  for (double eps : sc.epsilons) out.push_back(sup_Z_minus_I(coefficient_perturbation(sc, eps), tol, sc.sup_grid));
  return out;
}

struct LevinValues {
  double alpha = 0.0;  ///< |R|_1
  double beta = 0.0;   ///< |R^v R|_1
  double gamma = 0.0;  ///< |R R^v|_1
  double delta = 0.0;  ///< |R^v R - R R^v|_1
};

inline LevinValues levin_conditions(const CoeffFn& R) {
  const CoeffFn Rv = antiderivative(R);
  LevinValues out;
  out.alpha = l1_norm(R);
  out.beta = l1_norm(combine(Rv, R, [](const CMat& v, const CMat& r) { return v * r; }));
  out.gamma = l1_norm(combine(R, Rv, [](const CMat& r, const CMat& v) { return r * v; }));
  out.delta = l1_norm(combine(Rv, R, [](const CMat& v, const CMat& r) { return v * r - r * v; }));
  return out;
}

inline LevinValues levin_conditions(const FamilyScenario& sc, double eps) {
  return levin_conditions(coefficient_perturbation(sc, eps));
}

/// Quantities of the Kiguradze conditions 1)-7), 4') and 5').
struct KiguradzeRow {
  double A_l1 = 0.0;         ///< 1) |A(eps)|_1
  double f_l1 = 0.0;         ///< 2) |f(eps)|_1
  double U_norm = 0.0;       ///< 3) |U_eps|
  double cond4p = 0.0;       ///< 4') sup |R^v|
  double cond5p = 0.0;       ///< 5') sup |f^v(eps) - f^v(0)|
  double c_diff = 0.0;       ///< 6) |c_eps - c_0|
  double U_variation = 0.0;  ///< |U_eps - U_0|
  double strong_probe = 0.0; ///< 7) surrogate
};

inline KiguradzeRow kiguradze_battery(const FamilyScenario& sc, double eps) {
  const BVProblem p = sc.at(eps);
  const BVProblem base = sc.baseline();
  KiguradzeRow row;
  row.A_l1 = l1_norm(p.A);
  row.f_l1 = l1_norm(p.f);
  row.U_norm = operator_norm(p.U);

  const CoeffFn R = coefficient_perturbation(sc, eps);
  const CoeffFn Rv = antiderivative(R);
  row.cond4p = sup_norm_at(Rv, uniform_grid(sc.interval, resolved_grid_size(sc.interval, R.oscillation_scale,
                                                                            sc.sup_grid)));
  const VecFn df = difference(p.f, base.f);
  const VecFn dfv = antiderivative(df);
  row.cond5p = sup_norm_at(dfv, uniform_grid(sc.interval, resolved_grid_size(sc.interval, df.oscillation_scale,
                                                                             sc.sup_grid)));
  row.c_diff = abs_norm(p.c - base.c);
  row.U_variation = variation_distance(p.U, base.U);
  row.strong_probe = strong_convergence_probe(p.U, base.U, sc.probe_set());
  return row;
}

// ---------------------------------------------------------------------------
// Solution and Green-matrix convergence
// ---------------------------------------------------------------------------

struct SweepValue {
  std::optional<double> value;
  std::string error;
};

namespace detail {

inline double solution_distance(const BvpSolution& x, const BvpSolution& y, const Interval& iv, std::size_t grid) {
  std::vector<double> extra(x.Y.nodes().begin(), x.Y.nodes().end());
  extra.insert(extra.end(), y.Y.nodes().begin(), y.Y.nodes().end());
  const auto points = merged_grid(iv, grid, extra);
  double best = 0.0;
  for (double t : points) best = std::max(best, abs_norm(x.y(t) - y.y(t)));
  return best;
}

inline std::vector<double> union_locations(const BoundaryMeasure& x, const BoundaryMeasure& y) {
  return merged_breakpoints(x.atom_locations(), y.atom_locations());
}

template <class Fn>
SweepValue guarded(Fn&& fn) {
  try {
    return {fn(), {}};
  } catch (const Error& e) {
    return {std::nullopt, e.what()};
  }
}

}  // namespace detail

inline std::vector<SweepValue> solution_convergence(const FamilyScenario& sc, double tol) {
  const BvpSolution base = solve_bvp_full(sc.baseline(), tol);
  std::vector<SweepValue> out;
  for (double eps : sc.epsilons)
    out.push_back(detail::guarded([&] {
      return detail::solution_distance(solve_bvp_full(sc.at(eps), tol), base, sc.interval, sc.sup_grid);
    }));
  return out;
}

inline double green_distance(const GreenMatrix& G_eps, const GreenMatrix& G_0, std::size_t grid) {
  const auto avoid = detail::union_locations(G_eps.U(), G_0.U());
  const auto g = green_grid(G_0.interval(), grid, avoid);
  return max_abs_difference(tabulate(G_eps, g, g), tabulate(G_0, g, g));
}

inline std::vector<SweepValue> green_convergence(const FamilyScenario& sc, std::size_t grid, double tol) {
  const BVProblem b = sc.baseline();
  const GreenMatrix G0 = green_matrix(b.A, b.U, sc.interval, tol);
  std::vector<SweepValue> out;
  for (double eps : sc.epsilons)
    out.push_back(detail::guarded([&] {
      const BVProblem p = sc.at(eps);
      return green_distance(green_matrix(p.A, p.U, sc.interval, tol), G0, grid);
    }));
  return out;
}

struct MultipointRow {
  double epsilon;
  double variation;
  double max_weight_change;
  double sum_weight_change;
};

/// U_eps y = sum_k B_k(eps) y(t_k) with fixed distinct locations.
inline std::vector<MultipointRow> multipoint_equivalence(
    const Interval& iv, const std::vector<double>& locations,
    const std::function<std::vector<CMat>(double)>& weights, const std::vector<double>& epsilons) {
  for (std::size_t i = 1; i < locations.size(); ++i)
    if (std::find(locations.begin(), locations.begin() + static_cast<std::ptrdiff_t>(i), locations[i]) !=
        locations.begin() + static_cast<std::ptrdiff_t>(i))
      throw InvalidArgument("multipoint locations must be distinct");
  auto build = [&](double eps) {
    const auto w = weights(eps);
    if (w.size() != locations.size()) throw DimensionMismatch("one weight per location required");
    std::vector<Atom> atoms;
    for (std::size_t k = 0; k < w.size(); ++k) atoms.push_back({locations[k], w[k]});
    return BoundaryMeasure(w.front().dim(), iv, std::move(atoms));
  };
  const BoundaryMeasure U0 = build(0.0);
  const auto w0 = weights(0.0);
  std::vector<MultipointRow> out;
  for (double eps : epsilons) {
    const auto w = weights(eps);
    MultipointRow row{eps, variation_distance(build(eps), U0), 0.0, 0.0};
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double nu = induced_norm(w[k] - w0[k]);
      row.max_weight_change = std::max(row.max_weight_change, nu);
      row.sum_weight_change += nu;
    }
    out.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trend rules
// ---------------------------------------------------------------------------

struct TrendRules {
  /// "-> 0": last <= ratio * first.
  double vanishing_ratio = 0.25;
  /// "O(1)": max / min <= spread.
  double bounded_spread = 10.0;
  /// Columns entirely below this are treated as identically zero.
  double zero_floor = 1e-12;
};

/// Non-increasing from the second point on, and last <= ratio * first.
inline bool judge_vanishing(const std::vector<double>& v, const TrendRules& rules = {}) {
  if (v.empty()) return false;
  if (std::all_of(v.begin(), v.end(), [&](double x) { return std::abs(x) <= rules.zero_floor; })) return true;
  if (v.size() < 2) return false;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i + 1] > v[i] + rules.zero_floor) return false;
  return v.back() <= rules.vanishing_ratio * v.front();
}

/// max / min <= spread; a vanishing column also counts as bounded.
inline bool judge_bounded(const std::vector<double>& v, const TrendRules& rules = {}) {
  if (v.empty()) return false;
  if (judge_vanishing(v, rules)) return true;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*hi <= rules.zero_floor) return true;
  if (*lo <= 0.0) return false;
  return *hi / *lo <= rules.bounded_spread;
}

// ---------------------------------------------------------------------------
// Sweep report
// ---------------------------------------------------------------------------

struct ReportRow {
  double epsilon = 0.0;
  double supZ_minus_I = 0.0;
  LevinValues levin;
  KiguradzeRow kiguradze;
  std::optional<double> sol_diff;
  std::optional<double> green_diff;
  Complex determinant = 0.0;
  std::string error;
};

struct TrendSummary {
  bool supZ_vanishing = false;       // class M evidence
  bool alpha_bounded = false;
  bool beta_vanishing = false;
  bool gamma_vanishing = false;
  bool delta_vanishing = false;
  bool A_bounded = false;            // 1)
  bool f_bounded = false;            // 2)
  bool U_bounded = false;            // 3)
  bool cond4p_vanishing = false;     // 4')
  bool cond5p_vanishing = false;     // 5')
  bool c_vanishing = false;          // 6)
  bool strong_vanishing = false;     // 7)
  bool U_variation_vanishing = false;
  bool sol_vanishing = false;
  bool green_vanishing = false;

  bool kiguradze_conditions() const {
    return A_bounded && f_bounded && U_bounded && cond4p_vanishing && cond5p_vanishing && c_vanishing &&
           strong_vanishing;
  }
  bool theorem1_conditions() const {
    return supZ_vanishing && f_bounded && U_bounded && cond5p_vanishing && c_vanishing && strong_vanishing;
  }
  bool theorem2_conditions() const { return supZ_vanishing && U_variation_vanishing; }
  bool levin_any() const { return alpha_bounded || beta_vanishing || gamma_vanishing || delta_vanishing; }
};

struct ConvergenceReport {
  std::string scenario;
  Interval interval;
  std::size_t dim = 0;
  double tol = 0.0;
  std::size_t sup_grid = 0;
  std::size_t green_grid = 0;
  std::vector<ReportRow> rows;
  TrendSummary trends;
  std::string baseline_error;

  template <class Get>
  std::vector<double> column(Get get) const {
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(get(r));
    return out;
  }
};

inline TrendSummary summarize(const std::vector<ReportRow>& rows, const TrendRules& rules = {}) {
  auto col = [&rows](auto get) {
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(get(r));
    return v;
  };
  // Failed rows have no value; the trend over them is judged false.
  auto opt_col = [&rows](auto get) -> std::optional<std::vector<double>> {
    std::vector<double> v;
    for (const auto& r : rows) {
      const std::optional<double> x = get(r);
      if (!x) return std::nullopt;
      v.push_back(*x);
    }
    return v;
  };
  TrendSummary t;
  t.supZ_vanishing = judge_vanishing(col([](const ReportRow& r) { return r.supZ_minus_I; }), rules);
  t.alpha_bounded = judge_bounded(col([](const ReportRow& r) { return r.levin.alpha; }), rules);
  t.beta_vanishing = judge_vanishing(col([](const ReportRow& r) { return r.levin.beta; }), rules);
  t.gamma_vanishing = judge_vanishing(col([](const ReportRow& r) { return r.levin.gamma; }), rules);
  t.delta_vanishing = judge_vanishing(col([](const ReportRow& r) { return r.levin.delta; }), rules);
  t.A_bounded = judge_bounded(col([](const ReportRow& r) { return r.kiguradze.A_l1; }), rules);
  t.f_bounded = judge_bounded(col([](const ReportRow& r) { return r.kiguradze.f_l1; }), rules);
  t.U_bounded = judge_bounded(col([](const ReportRow& r) { return r.kiguradze.U_norm; }), rules);
  t.cond4p_vanishing = judge_vanishing(col([](const ReportRow& r) { return r.kiguradze.cond4p; }), rules);
  t.cond5p_vanishing = judge_vanishing(col([](const ReportRow& r) { return r.kiguradze.cond5p; }), rules);
  t.c_vanishing = judge_vanishing(col([](const ReportRow& r) { return r.kiguradze.c_diff; }), rules);
  t.strong_vanishing = judge_vanishing(col([](const ReportRow& r) { return r.kiguradze.strong_probe; }), rules);
  t.U_variation_vanishing = judge_vanishing(col([](const ReportRow& r) { return r.kiguradze.U_variation; }), rules);
  if (auto v = opt_col([](const ReportRow& r) { return r.sol_diff; })) t.sol_vanishing = judge_vanishing(*v, rules);
  if (auto v = opt_col([](const ReportRow& r) { return r.green_diff; }))
    t.green_vanishing = judge_vanishing(*v, rules);
  return t;
}

struct SweepOptions {
  std::size_t jobs = 1;
  TrendRules rules;
};

/// Runs every diagnostic for every epsilon. Rows are independent and may be
/// computed on several threads; they are stored in sweep order.
inline ConvergenceReport run_sweep(const FamilyScenario& sc, const SweepOptions& opt = {}) {
  sc.validate();
  ConvergenceReport report;
  report.scenario = sc.name;
  report.interval = sc.interval;
  report.dim = sc.dim;
  report.tol = sc.tol;
  report.sup_grid = sc.sup_grid;
  report.green_grid = sc.green_grid;
  report.rows.resize(sc.epsilons.size());

  const BVProblem base = sc.baseline();
  std::optional<BvpSolution> base_solution;
  std::optional<GreenMatrix> base_green;
  try {
    base_solution = solve_bvp_full(base, sc.tol);
    base_green.emplace(green_matrix(base.A, base.U, sc.interval, sc.tol));
  } catch (const Error& e) {
    report.baseline_error = e.what();
  }

  auto compute_row = [&](std::size_t idx) {
    ReportRow& row = report.rows[idx];
    const double eps = sc.epsilons[idx];
    row.epsilon = eps;
    std::vector<std::string> notes;
    try {
      const BVProblem p = sc.at(eps);
      const CoeffFn R = coefficient_perturbation(sc, eps);
      row.supZ_minus_I = sup_Z_minus_I(R, sc.tol, sc.sup_grid);
      row.levin = levin_conditions(R);
      row.kiguradze = kiguradze_battery(sc, eps);
      const Matrizant Y = matrizant(p.A, sc.interval, sc.tol);
      row.determinant = assess_wellposed(p.U, Y).determinant;
      if (base_solution) {
        auto sol = detail::guarded([&] {
          return detail::solution_distance(solve_bvp_full(p, sc.tol), *base_solution, sc.interval, sc.sup_grid);
        });
        row.sol_diff = sol.value;
        if (!sol.error.empty()) notes.push_back("solve: " + sol.error);
        auto grn = detail::guarded([&] { return green_distance(GreenMatrix(Y, p.U), *base_green, sc.green_grid); });
        row.green_diff = grn.value;
        if (!grn.error.empty()) notes.push_back("green: " + grn.error);
      } else {
        notes.push_back("baseline: " + report.baseline_error);
      }
    } catch (const Error& e) {
      notes.push_back(e.what());
    }
    for (std::size_t i = 0; i < notes.size(); ++i) row.error += (i ? "; " : "") + notes[i];
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(opt.jobs, sc.epsilons.size()));
  if (jobs == 1) {
    for (std::size_t i = 0; i < sc.epsilons.size(); ++i) compute_row(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < jobs; ++w)
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < sc.epsilons.size(); i = next++) compute_row(i);
      });
    for (auto& th : workers) th.join();
  }
  report.trends = summarize(report.rows, opt.rules);
  return report;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols = {
      "epsilon", "supZ_minus_I", "levin_alpha", "levin_beta", "levin_gamma", "levin_delta",
      "A_l1",    "f_l1",         "U_norm",      "cond4p",     "cond5p",      "c_diff",
      "U_variation", "strong_probe", "sol_diff", "green_diff", "det_re",      "det_im",
      "error"};
  return cols;
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

inline std::string opt_str(const std::optional<double>& x) { return x ? format_double(*x) : std::string{}; }

}  // namespace detail

inline void write_report_csv(std::ostream& os, const ConvergenceReport& r) {
  const auto& cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& row : r.rows) {
    const auto& k = row.kiguradze;
    os << format_double(row.epsilon) << ',' << format_double(row.supZ_minus_I) << ','
       << format_double(row.levin.alpha) << ',' << format_double(row.levin.beta) << ','
       << format_double(row.levin.gamma) << ',' << format_double(row.levin.delta) << ',' << format_double(k.A_l1)
       << ',' << format_double(k.f_l1) << ',' << format_double(k.U_norm) << ',' << format_double(k.cond4p) << ','
       << format_double(k.cond5p) << ',' << format_double(k.c_diff) << ',' << format_double(k.U_variation) << ','
       << format_double(k.strong_probe) << ',' << detail::opt_str(row.sol_diff) << ','
       << detail::opt_str(row.green_diff) << ',' << format_double(row.determinant.real()) << ','
       << format_double(row.determinant.imag()) << ',' << detail::csv_escape(row.error) << '\n';
  }
}

inline nlohmann::json trends_json(const TrendSummary& t) {
  return {{"supZ_vanishing", t.supZ_vanishing},
          {"alpha_bounded", t.alpha_bounded},
          {"beta_vanishing", t.beta_vanishing},
          {"gamma_vanishing", t.gamma_vanishing},
          {"delta_vanishing", t.delta_vanishing},
          {"A_bounded", t.A_bounded},
          {"f_bounded", t.f_bounded},
          {"U_bounded", t.U_bounded},
          {"cond4p_vanishing", t.cond4p_vanishing},
          {"cond5p_vanishing", t.cond5p_vanishing},
          {"c_vanishing", t.c_vanishing},
          {"strong_vanishing", t.strong_vanishing},
          {"U_variation_vanishing", t.U_variation_vanishing},
          {"sol_vanishing", t.sol_vanishing},
          {"green_vanishing", t.green_vanishing},
          {"kiguradze_conditions", t.kiguradze_conditions()},
          {"theorem1_conditions", t.theorem1_conditions()},
          {"theorem2_conditions", t.theorem2_conditions()},
          {"levin_any", t.levin_any()}};
}

/// Rows plus trend booleans; `scenario_echo` is embedded verbatim.
inline nlohmann::json report_json(const ConvergenceReport& r, const nlohmann::json& scenario_echo = {}) {
  nlohmann::json rows = nlohmann::json::array();
  auto opt = [](const std::optional<double>& x) { return x ? nlohmann::json(*x) : nlohmann::json(nullptr); };
  for (const auto& row : r.rows) {
    const auto& k = row.kiguradze;
    rows.push_back({{"epsilon", row.epsilon},
                    {"supZ_minus_I", row.supZ_minus_I},
                    {"levin_alpha", row.levin.alpha},
                    {"levin_beta", row.levin.beta},
                    {"levin_gamma", row.levin.gamma},
                    {"levin_delta", row.levin.delta},
                    {"A_l1", k.A_l1},
                    {"f_l1", k.f_l1},
                    {"U_norm", k.U_norm},
                    {"cond4p", k.cond4p},
                    {"cond5p", k.cond5p},
                    {"c_diff", k.c_diff},
                    {"U_variation", k.U_variation},
                    {"strong_probe", k.strong_probe},
                    {"sol_diff", opt(row.sol_diff)},
                    {"green_diff", opt(row.green_diff)},
                    {"det_re", row.determinant.real()},
                    {"det_im", row.determinant.imag()},
                    {"error", row.error}});
  }
  return {{"scenario", scenario_echo.is_null() ? nlohmann::json(r.scenario) : scenario_echo},
          {"interval", {r.interval.a, r.interval.b}},
          {"m", r.dim},
          {"tol", r.tol},
          {"sup_grid", r.sup_grid},
          {"green_grid", r.green_grid},
          {"baseline_error", r.baseline_error},
          {"rows", rows},
          {"trends", trends_json(r.trends)}};
}

}  // namespace bvpgreen
