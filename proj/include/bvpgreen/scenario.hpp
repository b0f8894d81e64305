#pragma once

// Scenario configuration and the named family registry used by the CLI.
//
// A config selects a family either by registry name ("example1") or by
// composition {"baseline": <coefficient>, "perturbation": <perturbation>},
// plus numeric parameters, boundary operator, forcing and boundary data.
// New families are added by appending a FamilyInfo to family_registry().

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bvpgreen/boundary.hpp"
#include "bvpgreen/convergence.hpp"
#include "bvpgreen/errors.hpp"
#include "bvpgreen/green.hpp"
#include "bvpgreen/linalg.hpp"
#include "bvpgreen/ode.hpp"

namespace bvpgreen {

using nlohmann::json;

/// Validation failure; `path` names the offending config field.
struct ConfigError : InvalidArgument {
  ConfigError(std::string path, const std::string& msg)
      : InvalidArgument(path + ": " + msg), path(std::move(path)) {}
  std::string path;
};

struct DensitySpec {
  std::string name;
  double scale = 1.0;
  friend bool operator==(const DensitySpec&, const DensitySpec&) = default;
};

struct BoundarySpec {
  std::vector<Atom> atoms;
  std::optional<DensitySpec> density;
};

inline bool operator==(const BoundarySpec& x, const BoundarySpec& y) {
  if (x.atoms.size() != y.atoms.size() || !(x.density == y.density)) return false;
  for (std::size_t i = 0; i < x.atoms.size(); ++i)
    if (x.atoms[i].location != y.atoms[i].location || !(x.atoms[i].weight == y.atoms[i].weight)) return false;
  return true;
}

struct FamilySpec {
  /// Registry family name; empty when composed.
  std::string name;
  std::string baseline;
  std::string perturbation;

  bool composed() const { return name.empty(); }
  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

struct ScenarioConfig {
  std::string name;
  FamilySpec family;
  std::optional<Interval> interval;
  std::optional<std::size_t> m;
  std::vector<double> epsilons = kDefaultEpsilons;
  double tol = 1e-8;
  std::size_t sup_grid = kDefaultSupGrid;
  std::size_t green_grid = kDefaultGreenGrid;
  json params = json::object();
  std::optional<BoundarySpec> boundary;
  std::optional<CVec> f;
  std::optional<CVec> c;
  std::string output_csv;
  std::string output_json;
  std::size_t jobs = 1;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// ---------------------------------------------------------------------------
// JSON <-> values
// ---------------------------------------------------------------------------

namespace cfg {

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
  return x;
}

inline std::size_t count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

inline std::vector<double> real_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<std::vector<double>> real_rows(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of rows");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(real_list(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline CMat from_rows(const std::vector<std::vector<double>>& re, const std::vector<std::vector<double>>& im,
                      const std::string& path) {
  const std::size_t m = re.size();
  if (m == 0 || m > kMaxDim) throw ConfigError(path, "matrix dimension must be in [1, 16]");
  if (!im.empty() && im.size() != m) throw ConfigError(path, "real and imaginary parts differ in shape");
  CMat out(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (re[i].size() != m || (!im.empty() && im[i].size() != m)) throw ConfigError(path, "matrix is not square");
    for (std::size_t j = 0; j < m; ++j) out(i, j) = Complex(re[i][j], im.empty() ? 0.0 : im[i][j]);
  }
  return out;
}

/// [[..]] (real) or {"re": [[..]], "im": [[..]]}.
inline CMat matrix(const json& j, const std::string& path) {
  if (j.is_object()) {
    if (!j.contains("re")) throw ConfigError(path + ".re", "missing");
    auto re = real_rows(j.at("re"), path + ".re");
    std::vector<std::vector<double>> im;
    if (j.contains("im")) im = real_rows(j.at("im"), path + ".im");
    return from_rows(re, im, path);
  }
  return from_rows(real_rows(j, path), {}, path);
}

/// [..] (real) or {"re": [..], "im": [..]}.
inline CVec vector(const json& j, const std::string& path) {
  std::vector<double> re;
  std::vector<double> im;
  if (j.is_object()) {
    if (!j.contains("re")) throw ConfigError(path + ".re", "missing");
    re = real_list(j.at("re"), path + ".re");
    if (j.contains("im")) im = real_list(j.at("im"), path + ".im");
    if (!im.empty() && im.size() != re.size()) throw ConfigError(path, "real and imaginary parts differ in length");
  } else {
    re = real_list(j, path);
  }
  if (re.empty() || re.size() > kMaxDim) throw ConfigError(path, "vector dimension must be in [1, 16]");
  CVec out(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) out[i] = Complex(re[i], im.empty() ? 0.0 : im[i]);
  return out;
}

inline json matrix_json(const CMat& a) {
  json re = json::array();
  json im = json::array();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    json rr = json::array();
    json ri = json::array();
    for (std::size_t j = 0; j < a.dim(); ++j) {
      rr.push_back(a(i, j).real());
      ri.push_back(a(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return {{"re", re}, {"im", im}};
}

inline json vector_json(const CVec& v) {
  json re = json::array();
  json im = json::array();
  for (std::size_t i = 0; i < v.dim(); ++i) {
    re.push_back(v[i].real());
    im.push_back(v[i].imag());
  }
  return {{"re", re}, {"im", im}};
}

inline void reject_unknown(const json& j, const std::vector<std::string>& known, const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ConfigError(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
}

}  // namespace cfg

inline BoundarySpec parse_boundary(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  cfg::reject_unknown(j, {"atoms", "density"}, path);
  BoundarySpec out;
  if (j.contains("atoms")) {
    const json& atoms = j.at("atoms");
    if (!atoms.is_array()) throw ConfigError(path + ".atoms", "expected an array");
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const std::string p = path + ".atoms[" + std::to_string(k) + "]";
      const json& a = atoms[k];
      if (!a.is_array() || a.size() != 3) throw ConfigError(p, "expected [t, real-matrix, imag-matrix]");
      const double t = cfg::number(a[0], p + "[0]");
      out.atoms.push_back({t, cfg::from_rows(cfg::real_rows(a[1], p + "[1]"), cfg::real_rows(a[2], p + "[2]"), p)});
    }
  }
  if (j.contains("density") && !j.at("density").is_null()) {
    const json& d = j.at("density");
    DensitySpec spec;
    if (d.is_string()) {
      spec.name = d.get<std::string>();
    } else if (d.is_object()) {
      cfg::reject_unknown(d, {"name", "scale"}, path + ".density");
      if (!d.contains("name") || !d.at("name").is_string()) throw ConfigError(path + ".density.name", "expected a string");
      spec.name = d.at("name").get<std::string>();
      if (d.contains("scale")) spec.scale = cfg::number(d.at("scale"), path + ".density.scale");
    } else {
      throw ConfigError(path + ".density", "expected a registry name or {name, scale}");
    }
    out.density = spec;
  }
  return out;
}

inline json boundary_json(const BoundarySpec& b) {
  json atoms = json::array();
  for (const auto& at : b.atoms) {
    json mj = cfg::matrix_json(at.weight);
    atoms.push_back({at.location, mj["re"], mj["im"]});
  }
  json out = {{"atoms", atoms}};
  if (b.density) out["density"] = {{"name", b.density->name}, {"scale", b.density->scale}};
  return out;
}

inline ScenarioConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("$", "config must be a JSON object");
  cfg::reject_unknown(j, {"name", "family", "interval", "m", "epsilons", "tol", "grid", "params", "boundary", "f",
                          "c", "output", "jobs"},
                      "");
  ScenarioConfig c;
  if (!j.contains("family")) throw ConfigError("family", "missing");
  const json& fam = j.at("family");
  if (fam.is_string()) {
    c.family.name = fam.get<std::string>();
  } else if (fam.is_object()) {
    cfg::reject_unknown(fam, {"baseline", "perturbation"}, "family");
    if (!fam.contains("baseline") || !fam.at("baseline").is_string())
      throw ConfigError("family.baseline", "expected a coefficient name");
    c.family.baseline = fam.at("baseline").get<std::string>();
    c.family.perturbation = fam.value("perturbation", std::string("none"));
  } else {
    throw ConfigError("family", "expected a registry name or {baseline, perturbation}");
  }
  c.name = j.value("name", c.family.composed() ? c.family.baseline + "+" + c.family.perturbation : c.family.name);

  if (j.contains("interval")) {
    auto iv = cfg::real_list(j.at("interval"), "interval");
    if (iv.size() != 2 || !(iv[0] < iv[1])) throw ConfigError("interval", "expected [a, b] with a < b");
    c.interval = Interval{iv[0], iv[1]};
  }
  if (j.contains("m")) {
    c.m = cfg::count(j.at("m"), "m");
    if (*c.m < 1 || *c.m > kMaxDim) throw ConfigError("m", "must be in [1, 16]");
  }
  if (j.contains("epsilons")) {
    c.epsilons = cfg::real_list(j.at("epsilons"), "epsilons");
    if (c.epsilons.empty()) throw ConfigError("epsilons", "must not be empty");
    for (std::size_t i = 0; i < c.epsilons.size(); ++i) {
      const std::string p = "epsilons[" + std::to_string(i) + "]";
      if (!(c.epsilons[i] > 0.0)) throw ConfigError(p, "must be positive");
      if (i > 0 && !(c.epsilons[i] < c.epsilons[i - 1])) throw ConfigError(p, "epsilons must be strictly decreasing");
    }
  }
  if (j.contains("tol")) {
    c.tol = cfg::number(j.at("tol"), "tol");
    if (!(c.tol >= LinearFlow::kMinTol && c.tol <= LinearFlow::kMaxTol))
      throw ConfigError("tol", "must lie in [1e-12, 1e-2]");
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (!g.is_object()) throw ConfigError("grid", "expected {sup, green}");
    cfg::reject_unknown(g, {"sup", "green"}, "grid");
    if (g.contains("sup")) c.sup_grid = cfg::count(g.at("sup"), "grid.sup");
    if (g.contains("green")) c.green_grid = cfg::count(g.at("green"), "grid.green");
    if (c.sup_grid < 2) throw ConfigError("grid.sup", "must be at least 2");
    if (c.green_grid < 1) throw ConfigError("grid.green", "must be at least 1");
  }
  if (j.contains("params")) {
    if (!j.at("params").is_object()) throw ConfigError("params", "expected an object");
    c.params = j.at("params");
  }
  if (j.contains("boundary")) c.boundary = parse_boundary(j.at("boundary"), "boundary");
  if (j.contains("f")) c.f = cfg::vector(j.at("f"), "f");
  if (j.contains("c")) c.c = cfg::vector(j.at("c"), "c");
  if (j.contains("output")) {
    const json& o = j.at("output");
    if (!o.is_object()) throw ConfigError("output", "expected {csv, json}");
    cfg::reject_unknown(o, {"csv", "json"}, "output");
    if (o.contains("csv")) c.output_csv = o.at("csv").get<std::string>();
    if (o.contains("json")) c.output_json = o.at("json").get<std::string>();
  }
  if (j.contains("jobs")) c.jobs = std::max<std::size_t>(1, cfg::count(j.at("jobs"), "jobs"));
  return c;
}

inline json config_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  if (c.family.composed())
    j["family"] = {{"baseline", c.family.baseline}, {"perturbation", c.family.perturbation}};
  else
    j["family"] = c.family.name;
  if (c.interval) j["interval"] = {c.interval->a, c.interval->b};
  if (c.m) j["m"] = *c.m;
  j["epsilons"] = c.epsilons;
  j["tol"] = c.tol;
  j["grid"] = {{"sup", c.sup_grid}, {"green", c.green_grid}};
  j["params"] = c.params;
  if (c.boundary) j["boundary"] = boundary_json(*c.boundary);
  if (c.f) j["f"] = cfg::vector_json(*c.f);
  if (c.c) j["c"] = cfg::vector_json(*c.c);
  json out = json::object();
  if (!c.output_csv.empty()) out["csv"] = c.output_csv;
  if (!c.output_json.empty()) out["json"] = c.output_json;
  if (!out.empty()) j["output"] = out;
  j["jobs"] = c.jobs;
  return j;
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

/// The oscillatory perturbation
///   R(t; eps) = [[0, cos(t/eps)/sqrt(eps)], [sin(2t/eps)/sqrt(eps), 0]].
inline CMat example1_perturbation(double t, double eps) {
  CMat r(2);
  const double amp = 1.0 / std::sqrt(eps);
  r(0, 1) = amp * std::cos(t / eps);
  r(1, 0) = amp * std::sin(2.0 * t / eps);
  return r;
}

struct ParamDoc {
  std::string name;
  std::string doc;
};

class ParamReader {
 public:
  ParamReader(const json& params, std::vector<std::string> known) : params_(params) {
    cfg::reject_unknown(params_, known, "params");
  }
  bool has(const std::string& key) const { return params_.contains(key); }
  double real(const std::string& key, double fallback) const {
    return has(key) ? cfg::number(params_.at(key), "params." + key) : fallback;
  }
  CMat matrix(const std::string& key, const CMat& fallback) const {
    if (!has(key)) return fallback;
    CMat out = cfg::matrix(params_.at(key), "params." + key);
    if (out.dim() != fallback.dim())
      throw ConfigError("params." + key, "expected a " + std::to_string(fallback.dim()) + "x" +
                                             std::to_string(fallback.dim()) + " matrix");
    return out;
  }
  std::vector<double> reals(const std::string& key, std::vector<double> fallback) const {
    return has(key) ? cfg::real_list(params_.at(key), "params." + key) : fallback;
  }
  std::vector<CMat> matrices(const std::string& key, std::vector<CMat> fallback, std::size_t m) const {
    if (!has(key)) return fallback;
    const json& j = params_.at(key);
    if (!j.is_array()) throw ConfigError("params." + key, "expected an array of matrices");
    std::vector<CMat> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string p = "params." + key + "[" + std::to_string(i) + "]";
      out.push_back(cfg::matrix(j[i], p));
      if (out.back().dim() != m) throw ConfigError(p, "expected an " + std::to_string(m) + "x" + std::to_string(m) + " matrix");
    }
    return out;
  }

 private:
  const json& params_;
};

struct DensityInfo {
  std::string name;
  std::string doc;
  std::function<double(double t, const Interval&)> shape;
};

inline const std::vector<DensityInfo>& density_registry() {
  static const std::vector<DensityInfo> reg = {
      {"one", "Phi(t) = scale * I", [](double, const Interval&) { return 1.0; }},
      {"linear", "Phi(t) = scale * (t - a) * I", [](double t, const Interval& iv) { return t - iv.a; }},
      {"cos", "Phi(t) = scale * cos(pi (t - a) / (b - a)) * I",
       [](double t, const Interval& iv) { return std::cos(std::numbers::pi * (t - iv.a) / iv.length()); }},
      {"exp", "Phi(t) = scale * exp(-(t - a)) * I", [](double t, const Interval& iv) { return std::exp(-(t - iv.a)); }},
  };
  return reg;
}

inline CoeffFn make_density(const DensitySpec& spec, std::size_t m, const Interval& iv, const std::string& path) {
  for (const auto& d : density_registry())
    if (d.name == spec.name) {
      const double scale = spec.scale;
      auto shape = d.shape;
      return CoeffFn{m, iv, [m, iv, scale, shape](double t) { return (scale * shape(t, iv)) * CMat::identity(m); },
                     {}, {}, {}};
    }
  throw ConfigError(path, "unknown density '" + spec.name + "'");
}

inline BoundaryMeasure make_boundary(const BoundarySpec& spec, std::size_t m, const Interval& iv) {
  for (std::size_t k = 0; k < spec.atoms.size(); ++k) {
    const std::string p = "boundary.atoms[" + std::to_string(k) + "]";
    if (spec.atoms[k].weight.dim() != m) throw ConfigError(p, "weight must be " + std::to_string(m) + "x" + std::to_string(m));
    if (!iv.contains(spec.atoms[k].location)) throw ConfigError(p + "[0]", "location outside the interval");
  }
  std::optional<CoeffFn> density;
  if (spec.density) density = make_density(*spec.density, m, iv, "boundary.density");
  return BoundaryMeasure(m, iv, spec.atoms, density);
}

struct CoefficientInfo {
  std::string name;
  std::string doc;
  std::vector<ParamDoc> params;
  /// (params, m, interval) -> eps -> A(.; eps) or its perturbation.
  /// Perturbations vanish identically at eps = 0.
  std::function<std::function<CoeffFn(double)>(const ParamReader&, std::size_t, const Interval&)> make;
};

inline const std::vector<CoefficientInfo>& baseline_registry() {
  static const std::vector<CoefficientInfo> reg = {
      {"zero", "A(t) = 0", {},
       [](const ParamReader&, std::size_t m, const Interval& iv) {
         return std::function<CoeffFn(double)>([m, iv](double) { return constant_coeff(CMat::zero(m), iv); });
       }},
      {"constant", "A(t) = A0", {{"A0", "m x m matrix (default 0)"}},
       [](const ParamReader& p, std::size_t m, const Interval& iv) {
         const CMat A0 = p.matrix("A0", CMat::zero(m));
         return std::function<CoeffFn(double)>([A0, iv](double) { return constant_coeff(A0, iv); });
       }},
      {"rotation", "m = 2, A(t) = [[0, omega], [-omega, 0]]", {{"omega", "angular rate (default 1)"}},
       [](const ParamReader& p, std::size_t m, const Interval& iv) {
         if (m != 2) throw ConfigError("m", "baseline 'rotation' requires m = 2");
         const double w = p.real("omega", 1.0);
         const CMat A0{{0.0, w}, {-w, 0.0}};
         return std::function<CoeffFn(double)>([A0, iv](double) { return constant_coeff(A0, iv); });
       }},
      {"trig", "A(t)_{jk} = cos((j + 1) t) / (k + 1) + i sin(t) delta_jk (smooth, time-dependent)", {},
       [](const ParamReader&, std::size_t m, const Interval& iv) {
         return std::function<CoeffFn(double)>([m, iv](double) {
           return CoeffFn{m, iv,
                          [m](double t) {
                            CMat a(m);
                            for (std::size_t j = 0; j < m; ++j)
                              for (std::size_t k = 0; k < m; ++k)
                                a(j, k) = std::cos(static_cast<double>(j + 1) * t) / static_cast<double>(k + 1) +
                                          (j == k ? Complex(0.0, std::sin(t)) : Complex{});
                            return a;
                          },
                          {}, {}, {}};
         });
       }},
  };
  return reg;
}

inline const std::vector<CoefficientInfo>& perturbation_registry() {
  static const std::vector<CoefficientInfo> reg = {
      {"none", "R = 0", {},
       [](const ParamReader&, std::size_t m, const Interval& iv) {
         return std::function<CoeffFn(double)>([m, iv](double) { return constant_coeff(CMat::zero(m), iv); });
       }},
      {"example1", "m = 2, R(t; eps) = [[0, cos(t/eps)/sqrt(eps)], [sin(2t/eps)/sqrt(eps), 0]]", {},
       [](const ParamReader&, std::size_t m, const Interval& iv) {
         if (m != 2) throw ConfigError("m", "perturbation 'example1' requires m = 2");
         return std::function<CoeffFn(double)>([iv](double eps) {
           if (eps == 0.0) return constant_coeff(CMat::zero(2), iv);
           CoeffFn r{2, iv, [eps](double t) { return example1_perturbation(t, eps); }, {}, {}, {}};
           r.oscillation_scale = eps;
           return r;
         });
       }},
      {"linear", "R(t; eps) = eps * B", {{"B", "m x m matrix (default: all ones)"}},
       [](const ParamReader& p, std::size_t m, const Interval& iv) {
         CMat ones(m);
         for (auto& z : ones.data()) z = 1.0;
         const CMat B = p.matrix("B", ones);
         return std::function<CoeffFn(double)>([B, iv](double eps) { return constant_coeff(eps * B, iv); });
       }},
  };
  return reg;
}

struct FamilyInfo {
  std::string name;
  std::string doc;
  std::vector<ParamDoc> params;
  std::function<FamilyScenario(const ScenarioConfig&)> build;
};

namespace detail {

inline FamilyScenario scenario_shell(const ScenarioConfig& c, Interval default_iv, std::size_t m) {
  FamilyScenario sc;
  sc.name = c.name;
  sc.interval = c.interval.value_or(default_iv);
  sc.dim = m;
  sc.epsilons = c.epsilons;
  sc.tol = c.tol;
  sc.sup_grid = c.sup_grid;
  sc.green_grid = c.green_grid;
  return sc;
}

inline std::size_t required_dim(const ScenarioConfig& c, std::optional<std::size_t> fixed, std::size_t fallback) {
  if (fixed) {
    if (c.m && *c.m != *fixed) throw ConfigError("m", "family requires m = " + std::to_string(*fixed));
    return *fixed;
  }
  return c.m.value_or(fallback);
}

inline CVec vec_or(const std::optional<CVec>& v, CVec fallback, const std::string& path) {
  if (!v) return fallback;
  if (v->dim() != fallback.dim()) throw ConfigError(path, "expected dimension " + std::to_string(fallback.dim()));
  return *v;
}

inline BoundaryMeasure boundary_or(const ScenarioConfig& c, std::size_t m, const Interval& iv,
                                   const BoundaryMeasure& fallback) {
  return c.boundary ? make_boundary(*c.boundary, m, iv) : fallback;
}

/// A(eps) = baseline + perturbation, fixed U, f, c.
inline FamilyScenario composed_scenario(const ScenarioConfig& c, std::function<CoeffFn(double)> base,
                                        std::function<CoeffFn(double)> pert, std::size_t m, const Interval& iv,
                                        BoundaryMeasure U, CVec f, CVec cvec) {
  FamilyScenario sc = scenario_shell(c, iv, m);
  const VecFn fv = constant_vec(f, sc.interval);
  sc.family = [base, pert, U, fv, cvec, iv = sc.interval](double eps) {
    CoeffFn A = combine(base(eps), pert(eps), [](const CMat& x, const CMat& y) { return x + y; });
    return BVProblem{iv, std::move(A), fv, U, cvec};
  };
  sc.perturbation = pert;
  return sc;
}

template <class Reg>
const auto& lookup(const Reg& reg, const std::string& name, const std::string& path) {
  for (const auto& e : reg)
    if (e.name == name) return e;
  throw ConfigError(path, "unknown name '" + name + "'");
}

template <class Reg>
std::vector<std::string> param_names(const Reg& reg, const std::string& name) {
  std::vector<std::string> out;
  for (const auto& e : reg)
    if (e.name == name)
      for (const auto& p : e.params) out.push_back(p.name);
  return out;
}

}  // namespace detail

inline const std::vector<FamilyInfo>& family_registry() {
  static const std::vector<FamilyInfo> reg = {
      {"constant",
       "eps-independent problem A = A0, fixed U, f, c (null family)",
       {{"A0", "m x m matrix (default 0)"}},
       [](const ScenarioConfig& c) {
         const std::size_t m = detail::required_dim(c, std::nullopt, 1);
         const Interval iv = c.interval.value_or(Interval{0.0, 1.0});
         ParamReader p(c.params, {"A0"});
         const CMat A0 = p.matrix("A0", CMat::zero(m));
         auto base = [A0, iv](double) { return constant_coeff(A0, iv); };
         auto none = [m, iv](double) { return constant_coeff(CMat::zero(m), iv); };
         return detail::composed_scenario(
             c, base, none, m, iv, detail::boundary_or(c, m, iv, BoundaryMeasure::initial_value(m, iv)),
             detail::vec_or(c.f, CVec(m), "f"), detail::vec_or(c.c, CVec(m), "c"));
       }},
      {"example1",
       "m = 2 on [0, 1]: A(eps) = A0 + [[0, cos(t/eps)/sqrt(eps)], [sin(2t/eps)/sqrt(eps), 0]], U y = y(0), "
       "c = (1, 1), f = 0",
       {{"A0", "2 x 2 baseline matrix (default 0)"}},
       [](const ScenarioConfig& c) {
         const std::size_t m = detail::required_dim(c, 2, 2);
         const Interval iv = c.interval.value_or(Interval{0.0, 1.0});
         ParamReader p(c.params, {"A0"});
         const CMat A0 = p.matrix("A0", CMat::zero(2));
         auto base = [A0, iv](double) { return constant_coeff(A0, iv); };
         auto pert = detail::lookup(perturbation_registry(), "example1", "family").make(p, m, iv);
         return detail::composed_scenario(
             c, base, pert, m, iv, detail::boundary_or(c, m, iv, BoundaryMeasure::initial_value(m, iv)),
             detail::vec_or(c.f, CVec(2), "f"), detail::vec_or(c.c, CVec{1.0, 1.0}, "c"));
       }},
      {"example2",
       "m = 1 on [0, 1]: A = 0, U_eps y = weight * y(eps), f = 1, c = 0",
       {{"weight", "atom weight (default 1)"}},
       [](const ScenarioConfig& c) {
         detail::required_dim(c, 1, 1);
         if (c.boundary) throw ConfigError("boundary", "family 'example2' defines its own boundary operator");
         ParamReader p(c.params, {"weight"});
         const double w = p.real("weight", 1.0);
         if (w == 0.0) throw ConfigError("params.weight", "must be nonzero");
         FamilyScenario sc = detail::scenario_shell(c, Interval{0.0, 1.0}, 1);
         const Interval iv = sc.interval;
         if (iv.a != 0.0) throw ConfigError("interval", "family 'example2' places the atom at t = eps; a must be 0");
         const VecFn f = constant_vec(detail::vec_or(c.f, CVec{1.0}, "f"), iv);
         const CVec cv = detail::vec_or(c.c, CVec{0.0}, "c");
         sc.family = [iv, w, f, cv](double eps) {
           if (eps > iv.b) throw InvalidArgument("example2: eps beyond the interval");
           return BVProblem{iv, constant_coeff(CMat::zero(1), iv), f, BoundaryMeasure::point(iv, eps, CMat{{w}}), cv};
         };
         return sc;
       }},
      {"linear_perturbation",
       "A(eps) = A0 + eps B, U_eps = U_0 + eps * C at t = at; default m = 2, U_0 y = y(a) + y(b)/2",
       {{"A0", "m x m (default [[0,1],[-1,0]] for m = 2, else 0)"},
        {"B", "m x m (default all ones)"},
        {"C", "m x m boundary perturbation weight (default I)"},
        {"at", "location of the boundary perturbation (default b)"}},
       [](const ScenarioConfig& c) {
         const std::size_t m = detail::required_dim(c, std::nullopt, 2);
         const Interval iv = c.interval.value_or(Interval{0.0, 1.0});
         ParamReader p(c.params, {"A0", "B", "C", "at"});
         CMat A0_default = CMat::zero(m);
         if (m == 2) A0_default = CMat{{0.0, 1.0}, {-1.0, 0.0}};
         const CMat A0 = p.matrix("A0", A0_default);
         CMat ones(m);
         for (auto& z : ones.data()) z = 1.0;
         const CMat B = p.matrix("B", ones);
         const CMat C = p.matrix("C", CMat::identity(m));
         const double at = p.real("at", iv.b);
         if (!iv.contains(at)) throw ConfigError("params.at", "outside the interval");
         const BoundaryMeasure U0 = detail::boundary_or(
             c, m, iv,
             BoundaryMeasure(m, iv, {{iv.a, CMat::identity(m)}, {iv.b, 0.5 * CMat::identity(m)}}));
         CVec f_default(m);
         f_default[0] = 1.0;
         const VecFn f = constant_vec(detail::vec_or(c.f, f_default, "f"), iv);
         CVec c_default(m);
         for (std::size_t i = 0; i < m; ++i) c_default[i] = 1.0;
         const CVec cv = detail::vec_or(c.c, c_default, "c");
         FamilyScenario sc = detail::scenario_shell(c, iv, m);
         sc.family = [A0, B, C, at, U0, f, cv, iv](double eps) {
           std::vector<Atom> atoms = U0.atoms();
           atoms.push_back({at, eps * C});
           BoundaryMeasure U(U0.dim(), iv, std::move(atoms), U0.density());
           return BVProblem{iv, constant_coeff(A0 + eps * B, iv), f, std::move(U), cv};
         };
         return sc;
       }},
      {"multipoint",
       "U_eps y = sum_k (B_k + eps C_k) y(t_k) at fixed locations; A = A0",
       {{"locations", "distinct points t_k (default [a, (a+b)/2, b])"},
        {"B", "list of m x m baseline weights (default I, I/2, I/4)"},
        {"C", "list of m x m perturbation weights (default I, 0, [[0,1],[1,0]]-like exchange)"},
        {"A0", "m x m coefficient (default 0)"}},
       [](const ScenarioConfig& c) {
         const std::size_t m = detail::required_dim(c, std::nullopt, 2);
         const Interval iv = c.interval.value_or(Interval{0.0, 1.0});
         if (c.boundary) throw ConfigError("boundary", "family 'multipoint' builds its own boundary operator");
         ParamReader p(c.params, {"locations", "B", "C", "A0"});
         const auto locs = p.reals("locations", {iv.a, 0.5 * (iv.a + iv.b), iv.b});
         for (std::size_t k = 0; k < locs.size(); ++k) {
           if (!iv.contains(locs[k])) throw ConfigError("params.locations[" + std::to_string(k) + "]", "outside the interval");
           for (std::size_t l = 0; l < k; ++l)
             if (locs[l] == locs[k]) throw ConfigError("params.locations[" + std::to_string(k) + "]", "duplicate location");
         }
         const CMat I = CMat::identity(m);
         CMat exchange(m);
         for (std::size_t i = 0; i < m; ++i) exchange(i, m - 1 - i) = 1.0;
         std::vector<CMat> B_default;
         std::vector<CMat> C_default;
         for (std::size_t k = 0; k < locs.size(); ++k) {
           B_default.push_back(std::pow(0.5, static_cast<double>(k)) * I);
           C_default.push_back(k == 0 ? I : (k + 1 == locs.size() ? exchange : CMat::zero(m)));
         }
         const auto B = p.matrices("B", B_default, m);
         const auto C = p.matrices("C", C_default, m);
         if (B.size() != locs.size()) throw ConfigError("params.B", "one matrix per location required");
         if (C.size() != locs.size()) throw ConfigError("params.C", "one matrix per location required");
         const CMat A0 = p.matrix("A0", CMat::zero(m));
         const VecFn f = constant_vec(detail::vec_or(c.f, CVec(m), "f"), iv);
         CVec c_default(m);
         for (std::size_t i = 0; i < m; ++i) c_default[i] = 1.0;
         const CVec cv = detail::vec_or(c.c, c_default, "c");
         FamilyScenario sc = detail::scenario_shell(c, iv, m);
         sc.family = [locs, B, C, A0, f, cv, iv, m](double eps) {
           std::vector<Atom> atoms;
           for (std::size_t k = 0; k < locs.size(); ++k) atoms.push_back({locs[k], B[k] + eps * C[k]});
           return BVProblem{iv, constant_coeff(A0, iv), f, BoundaryMeasure(m, iv, std::move(atoms)), cv};
         };
         return sc;
       }},
  };
  return reg;
}

/// Composition: A(eps) = baseline coefficient + perturbation, U/f/c from the
/// config (defaults: U y = y(a), f = 0, c = 1).
inline FamilyScenario build_composed(const ScenarioConfig& c) {
  const auto& base_info = detail::lookup(baseline_registry(), c.family.baseline, "family.baseline");
  const auto& pert_info = detail::lookup(perturbation_registry(), c.family.perturbation, "family.perturbation");
  std::vector<std::string> known;
  for (const auto& pd : base_info.params) known.push_back(pd.name);
  for (const auto& pd : pert_info.params) known.push_back(pd.name);
  const std::size_t m = c.m.value_or(2);
  const Interval iv = c.interval.value_or(Interval{0.0, 1.0});
  ParamReader p(c.params, known);
  CVec ones(m);
  for (std::size_t i = 0; i < m; ++i) ones[i] = 1.0;
  return detail::composed_scenario(c, base_info.make(p, m, iv), pert_info.make(p, m, iv), m, iv,
                                   detail::boundary_or(c, m, iv, BoundaryMeasure::initial_value(m, iv)),
                                   detail::vec_or(c.f, CVec(m), "f"), detail::vec_or(c.c, ones, "c"));
}

inline FamilyScenario build_scenario(const ScenarioConfig& c) {
  if (c.family.composed()) return build_composed(c);
  return detail::lookup(family_registry(), c.family.name, "family").build(c);
}

struct RegistryEntry {
  std::string kind;  // family | baseline | perturbation | density
  std::string name;
  std::string doc;
  std::vector<ParamDoc> params;
};

inline std::vector<RegistryEntry> registry_list() {
  std::vector<RegistryEntry> out;
  for (const auto& f : family_registry()) out.push_back({"family", f.name, f.doc, f.params});
  for (const auto& f : baseline_registry()) out.push_back({"baseline", f.name, f.doc, f.params});
  for (const auto& f : perturbation_registry()) out.push_back({"perturbation", f.name, f.doc, f.params});
  for (const auto& d : density_registry()) out.push_back({"density", d.name, d.doc, {{"scale", "multiplier"}}});
  return out;
}

}  // namespace bvpgreen
