#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"

using namespace bvpgreen;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const Interval kUnit{0.0, 1.0};

FamilyScenario constant_family() {
  const CMat A0{{0.0, 1.0}, {-2.0, Complex(0.0, 0.5)}};
  FamilyScenario sc;
  sc.name = "constant";
  sc.interval = kUnit;
  sc.dim = 2;
  sc.epsilons = {1e-1, 1e-2, 1e-3};
  sc.family = [A0](double) {
    return BVProblem{kUnit, constant_coeff(A0, kUnit), constant_vec(CVec{1.0, 0.0}, kUnit),
                     BoundaryMeasure(2, kUnit, {{0.0, CMat::identity(2)}, {1.0, 0.5 * CMat::identity(2)}}),
                     CVec{1.0, 1.0}};
  };
  return sc;
}

const CMat kA0{{0.0, 1.0}, {-1.0, 0.0}};
const CMat kB{{1.0, 0.5}, {0.0, -1.0}};

FamilyScenario linear_family() {
  FamilyScenario sc;
  sc.name = "linear";
  sc.interval = kUnit;
  sc.dim = 2;
  sc.epsilons = {1e-1, 3.16e-2, 1e-2, 3.16e-3, 1e-3};
  sc.family = [](double eps) {
    return BVProblem{kUnit, constant_coeff(kA0 + eps * kB, kUnit), constant_vec(CVec{1.0, 0.0}, kUnit),
                     BoundaryMeasure(2, kUnit, {{0.0, CMat::identity(2)}, {1.0, (0.5 + eps) * CMat::identity(2)}}),
                     CVec{1.0, 1.0}};
  };
  return sc;
}

CoeffFn ex1(double eps) {
  CoeffFn R{2, kUnit, [eps](double t) { return oracle::ex1_R(t, eps); }, {}, {}, {}};
  R.oscillation_scale = eps;
  return R;
}

}  // namespace

TEST_CASE("class M diagnostic", "[convergence]") {
  const FamilyScenario zero = constant_family();
  for (double v : class_M_diagnostic(zero, 1e-8)) CHECK(v == 0.0);
  const double nB = abs_norm(kB);
  const FamilyScenario lin = linear_family();
  const auto col = class_M_diagnostic(lin, 1e-10);
  for (std::size_t i = 0; i < col.size(); ++i) {
    const double eps = lin.epsilons[i];
    CHECK(col[i] <= std::expm1(eps * nB) * (1 + 1e-6));
    CHECK(col[i] > 0.0);
  }
  CHECK(judge_vanishing(col));
}

TEST_CASE("Levin integrals", "[convergence]") {
  const LevinValues z = levin_conditions(constant_coeff(CMat::zero(2), kUnit));
  CHECK(z.alpha == 0.0);
  CHECK(z.beta == 0.0);
  CHECK(z.gamma == 0.0);
  CHECK(z.delta == 0.0);

  const CoeffFn scalar{1, kUnit, [](double t) { return CMat{{std::cos(7.0 * t)}}; }, {}, {}, {}};
  CHECK(levin_conditions(scalar).delta <= 1e-15);

  const double eps = 1e-2;
  const LevinValues v = levin_conditions(ex1(eps));
  const std::size_t n = 2'000'000;
  auto ref = [&](auto op) {
    return oracle::midpoint([&](double t) { return abs_norm(op(oracle::ex1_Rv(t, eps), oracle::ex1_R(t, eps))); }, 0.0,
                            1.0, n);
  };
  CHECK_THAT(v.beta, WithinRel(ref([](const CMat& a, const CMat& r) { return a * r; }), 1e-6));
  CHECK_THAT(v.gamma, WithinRel(ref([](const CMat& a, const CMat& r) { return r * a; }), 1e-6));
  CHECK_THAT(v.delta, WithinRel(ref([](const CMat& a, const CMat& r) { return a * r - r * a; }), 1e-6));

  const LevinValues small = levin_conditions(ex1(1e-3));
  CHECK_THAT(small.beta, WithinRel(2.0 / std::numbers::pi, 0.01));
  CHECK_THAT(small.gamma, WithinRel(2.0 / std::numbers::pi, 0.01));
  CHECK_THAT(small.delta, WithinRel(4.0 / (3.0 * std::numbers::pi), 0.01));
}

TEST_CASE("Kiguradze battery", "[convergence]") {
  const FamilyScenario zero = constant_family();
  const KiguradzeRow r = kiguradze_battery(zero, 1e-2);
  CHECK(r.cond4p == 0.0);
  CHECK(r.cond5p == 0.0);
  CHECK(r.c_diff == 0.0);
  CHECK(r.strong_probe == 0.0);
  CHECK(r.U_variation == 0.0);

  FamilyScenario osc;
  osc.interval = kUnit;
  osc.dim = 2;
  osc.family = [](double eps) {
    return BVProblem{kUnit, eps == 0.0 ? constant_coeff(CMat::zero(2), kUnit) : ex1(eps),
                     constant_vec(CVec(2), kUnit), BoundaryMeasure::initial_value(2, kUnit), CVec{1.0, 1.0}};
  };
  for (double eps : {1e-2, 1e-3}) {
    const KiguradzeRow k = kiguradze_battery(osc, eps);
    CHECK(k.cond4p <= 2.0 * std::sqrt(eps) + 1e-6);
    CHECK_THAT(k.A_l1 * std::sqrt(eps), WithinRel(oracle::kFourOverPi, 0.03));
  }

  FamilyScenario shift;
  shift.interval = kUnit;
  shift.dim = 1;
  shift.family = [](double eps) {
    return BVProblem{kUnit, constant_coeff(CMat::zero(1), kUnit), constant_vec(CVec{1.0}, kUnit),
                     BoundaryMeasure::point(kUnit, eps, CMat{{1.0}}), CVec{0.0}};
  };
  const VecFn probe{1, kUnit, [](double t) { return CVec{t}; }, {}, {}, {}};
  shift.probes = {probe};
  for (double eps : {0.1, 0.01}) {
    const KiguradzeRow k = kiguradze_battery(shift, eps);
    CHECK(k.U_variation == 2.0);
    CHECK_THAT(k.strong_probe, WithinAbs(eps, 1e-15));
  }
}

TEST_CASE("solution and Green convergence for a regular perturbation", "[convergence]") {
  const FamilyScenario zero = constant_family();
  for (const auto& v : solution_convergence(zero, 1e-8)) CHECK(*v.value <= 1e-7);
  for (const auto& v : green_convergence(zero, 51, 1e-8)) CHECK(*v.value == 0.0);

  const FamilyScenario lin = linear_family();
  const auto sol = solution_convergence(lin, 1e-10);
  const auto grn = green_convergence(lin, 51, 1e-10);
  std::vector<double> s;
  std::vector<double> g;
  for (std::size_t i = 0; i < sol.size(); ++i) {
    s.push_back(*sol[i].value);
    g.push_back(*grn[i].value);
  }
  CHECK(judge_vanishing(s));
  CHECK(judge_vanishing(g));
  std::vector<double> sr;
  std::vector<double> gr;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sr.push_back(s[i] / lin.epsilons[i]);
    gr.push_back(g[i] / lin.epsilons[i]);
  }
  CHECK(judge_bounded(sr));
  CHECK(judge_bounded(gr));

  // twice the grid density changes little
  FamilyScenario fine = lin;
  fine.sup_grid = 2 * lin.sup_grid;
  const auto sol2 = solution_convergence(fine, 1e-10);
  const auto grn2 = green_convergence(lin, 102, 1e-10);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK_THAT(*sol2[i].value, WithinRel(s[i], 0.1));
    CHECK_THAT(*grn2[i].value, WithinRel(g[i], 0.1));
  }
}

TEST_CASE("Levin bridge and theory consistency on the regular family", "[convergence][property]") {
  const ConvergenceReport r = run_sweep(linear_family());
  REQUIRE(r.baseline_error.empty());
  REQUIRE(r.trends.alpha_bounded);
  CHECK(r.trends.cond4p_vanishing);
  CHECK(r.trends.supZ_vanishing);
  CHECK(r.trends.theorem2_conditions());
  CHECK(r.trends.sol_vanishing);
  CHECK(r.trends.green_vanishing);
}

TEST_CASE("multipoint equivalence", "[convergence]") {
  const std::vector<double> locs = {0.0, 0.5, 1.0};
  const CMat I = CMat::identity(2);
  const auto fixed = multipoint_equivalence(kUnit, locs, [&](double) { return std::vector<CMat>{I, 0.5 * I, I}; },
                                            {0.1, 0.01});
  for (const auto& r : fixed) {
    CHECK(r.variation == 0.0);
    CHECK(r.sum_weight_change == 0.0);
  }
  const auto one = multipoint_equivalence(
      kUnit, locs, [&](double e) { return std::vector<CMat>{I + e * I, 0.5 * I, I}; }, {0.1, 0.01});
  for (const auto& r : one) {
    CHECK_THAT(r.variation, WithinAbs(r.epsilon, 1e-15));
    CHECK_THAT(r.max_weight_change, WithinAbs(r.epsilon, 1e-15));
  }
  std::mt19937_64 rng(61);
  std::vector<CMat> C;
  for (int k = 0; k < 3; ++k) C.push_back(oracle::random_matrix(rng, 2));
  const auto rnd = multipoint_equivalence(
      kUnit, locs, [&](double e) { return std::vector<CMat>{I + e * C[0], 0.5 * I + e * C[1], e * C[2]}; },
      {0.1, 0.01, 0.001});
  for (const auto& r : rnd) {
    double expected = 0.0;
    for (const auto& c : C) expected += induced_norm(r.epsilon * c);
    CHECK_THAT(r.variation, WithinAbs(expected, 1e-12));
    CHECK_THAT(r.variation, WithinAbs(r.sum_weight_change, 1e-12));
  }
  CHECK_THROWS_AS(multipoint_equivalence(kUnit, {0.2, 0.2}, [&](double) { return std::vector<CMat>{I, I}; }, {0.1}),
                  InvalidArgument);
}

TEST_CASE("trend rules", "[convergence]") {
  CHECK(judge_vanishing({1.0, 0.5, 0.2}));
  CHECK(judge_vanishing({0.5, 1.0, 0.5, 0.1}));  // first point may be below the second
  CHECK_FALSE(judge_vanishing({1.0, 0.5, 0.6, 0.1}));
  CHECK_FALSE(judge_vanishing({1.0, 0.9, 0.8}));
  CHECK(judge_vanishing({0.0, 0.0, 0.0}));
  CHECK(judge_bounded({1.0, 5.0, 9.9}));
  CHECK_FALSE(judge_bounded({1.0, 11.0}));
  CHECK(judge_bounded({0.0, 0.0}));
  CHECK_FALSE(judge_bounded({0.0, 1.0}));
  CHECK(judge_bounded({1.0, 1e-2, 1e-4}));
}

TEST_CASE("sweep report on the constant family", "[convergence]") {
  const ConvergenceReport r = run_sweep(constant_family());
  REQUIRE(r.rows.size() == 3);
  for (const auto& row : r.rows) {
    CHECK(row.supZ_minus_I == 0.0);
    CHECK(row.kiguradze.cond4p == 0.0);
    CHECK(row.kiguradze.cond5p == 0.0);
    CHECK(row.kiguradze.c_diff == 0.0);
    CHECK(row.kiguradze.strong_probe == 0.0);
    CHECK(*row.sol_diff <= 1e-7);
    CHECK(*row.green_diff == 0.0);
    CHECK(row.error.empty());
  }
  CHECK(r.trends.supZ_vanishing);
  CHECK(r.trends.kiguradze_conditions());
}

TEST_CASE("degenerate rows are recorded, not fatal", "[convergence]") {
  FamilyScenario sc;
  sc.name = "degenerate";
  sc.interval = kUnit;
  sc.dim = 1;
  sc.epsilons = {0.6, 0.5, 0.4};
  sc.family = [](double eps) {
    return BVProblem{kUnit, constant_coeff(CMat::zero(1), kUnit), constant_vec(CVec{1.0}, kUnit),
                     BoundaryMeasure(1, kUnit, {{0.0, CMat{{1.0}}}, {1.0, CMat{{-2.0 * eps}}}}), CVec{0.0}};
  };
  const ConvergenceReport r = run_sweep(sc);
  CHECK(r.rows[0].error.empty());
  CHECK_FALSE(r.rows[1].error.empty());
  CHECK_FALSE(r.rows[1].sol_diff.has_value());
  CHECK(r.rows[2].error.empty());
  CHECK_FALSE(r.trends.sol_vanishing);
}

TEST_CASE("ill-posed limit problem is rejected", "[convergence]") {
  FamilyScenario sc;
  sc.interval = kUnit;
  sc.dim = 1;
  sc.family = [](double) {
    return BVProblem{kUnit, constant_coeff(CMat::zero(1), kUnit), constant_vec(CVec{1.0}, kUnit),
                     BoundaryMeasure(1, kUnit, {{0.0, CMat{{1.0}}}, {1.0, CMat{{-1.0}}}}), CVec{0.0}};
  };
  CHECK_THROWS_AS(run_sweep(sc), NonUnique);
}

TEST_CASE("parallel sweep matches the serial one", "[convergence]") {
  const FamilyScenario lin = linear_family();
  std::ostringstream a;
  std::ostringstream b;
  write_report_csv(a, run_sweep(lin, {1, {}}));
  write_report_csv(b, run_sweep(lin, {3, {}}));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("epsilon,supZ_minus_I,levin_alpha", 0) == 0);
}
