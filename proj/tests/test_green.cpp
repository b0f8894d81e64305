#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"

using namespace bvpgreen;
using Catch::Matchers::WithinAbs;

namespace {

const Interval kUnit{0.0, 1.0};
constexpr double kTol = 1e-10;

CoeffFn scalar(Complex lambda) { return constant_coeff(CMat{{lambda}}, kUnit); }

BoundaryMeasure periodic1() { return BoundaryMeasure(1, kUnit, {{0.0, CMat{{1.0}}}, {1.0, CMat{{-1.0}}}}); }

double sup_diff(const VecFn& x, const VecFn& y, std::size_t n = 401) {
  return sup_norm_at([&](double t) { return x(t) - y(t); }, uniform_grid(x.domain, n));
}

}  // namespace

TEST_CASE("well-posedness determinants", "[green]") {
  std::mt19937_64 rng(51);
  const CoeffFn A = oracle::random_coefficient(rng, 3, kUnit);
  CHECK(std::abs(check_wellposed(A, BoundaryMeasure::initial_value(3, kUnit), kUnit, kTol) - 1.0) == 0.0);
  CHECK(std::abs(check_wellposed(scalar(0.0), periodic1(), kUnit, kTol)) == 0.0);
  const Complex d = check_wellposed(scalar(Complex(0.0, std::numbers::pi / 2)), periodic1(), kUnit, kTol);
  CHECK(std::abs(d - Complex(1.0, -1.0)) <= 1e-9);
  const WellposedCheck c = assess_wellposed(periodic1(), matrizant(scalar(0.0), kUnit, kTol));
  CHECK_FALSE(c.ok());
}

TEST_CASE("degenerate problems are rejected", "[green]") {
  const BVProblem p{kUnit, scalar(0.0), constant_vec(CVec{1.0}, kUnit), periodic1(), CVec{0.0}};
  CHECK_THROWS_AS(solve_bvp(p, kTol), NonUnique);
  CHECK_THROWS_AS(green_matrix(scalar(0.0), periodic1(), kUnit, kTol), SingularBoundary);
}

TEST_CASE("solve_bvp examples", "[green]") {
  std::mt19937_64 rng(52);
  const CoeffFn A = oracle::random_coefficient(rng, 2, kUnit);
  const BoundaryMeasure U(2, kUnit, {{0.0, CMat::identity(2)}, {1.0, CMat::identity(2)}});
  const VecFn y0 = solve_bvp({kUnit, A, constant_vec(CVec(2), kUnit), U, CVec(2)}, kTol);
  CHECK(sup_norm(y0, kUnit, 101) == 0.0);

  const VecFn yt = solve_bvp({kUnit, scalar(0.0), constant_vec(CVec{1.0}, kUnit),
                              BoundaryMeasure::initial_value(1, kUnit), CVec{0.0}},
                             kTol);
  for (double t : {0.0, 0.3, 1.0}) CHECK_THAT(yt(t)[0].real(), WithinAbs(t, 1e-12));

  const BoundaryMeasure two(1, kUnit, {{0.0, CMat{{1.0}}}, {1.0, CMat{{1.0}}}});
  const VecFn ye = solve_bvp({kUnit, scalar(1.0), constant_vec(CVec{0.0}, kUnit), two, CVec{1.0 + std::exp(1.0)}}, kTol);
  for (double t = 0.0; t <= 1.0; t += 0.05) CHECK(std::abs(ye(t)[0] - std::exp(t)) <= 1e-8);
}

TEST_CASE("Green matrix of the initial-value problem for y' = f", "[green]") {
  const GreenMatrix G = green_matrix(scalar(0.0), BoundaryMeasure::initial_value(1, kUnit), kUnit, kTol);
  const auto g = green_grid(kUnit, 41);
  for (double t : g)
    for (double s : g) {
      if (s == t) continue;
      CHECK(std::abs(G(t, s)(0, 0) - (s < t ? 1.0 : 0.0)) <= 1e-12);
    }
  // diagonal takes the s <= t branch
  CHECK(std::abs(G(0.4, 0.4)(0, 0) - 1.0) <= 1e-12);
  const VecFn y = green_apply(G, constant_vec(CVec{1.0}, kUnit));
  for (double t : {0.1, 0.5, 1.0}) CHECK_THAT(y(t)[0].real(), WithinAbs(t, 1e-12));
}

TEST_CASE("Green matrix with the evaluation point shifted to eps", "[green]") {
  const GreenMatrix G0 = green_matrix(scalar(0.0), BoundaryMeasure::initial_value(1, kUnit), kUnit, kTol);
  for (double eps : {0.1, 0.05, 0.01}) {
    const GreenMatrix Ge = green_matrix(scalar(0.0), BoundaryMeasure::point(kUnit, eps, CMat{{1.0}}), kUnit, kTol);
    const auto g = green_grid(kUnit, 201, std::vector<double>{eps});
    double sup = 0.0;
    for (double t : g)
      for (double s : g) {
        const double d = std::abs(Ge(t, s)(0, 0) - G0(t, s)(0, 0));
        sup = std::max(sup, d);
        // difference is -1 exactly on s < eps, including the square [0, eps]^2
        const double expected = s < eps ? 1.0 : 0.0;
        CHECK(std::abs(d - expected) <= 1e-12);
      }
    CHECK_THAT(sup, WithinAbs(1.0, 1e-12));
    const double inner = 0.5 * eps;
    CHECK(std::abs(Ge(inner, 0.3 * eps)(0, 0) - (G0(inner, 0.3 * eps)(0, 0) - 1.0)) <= 1e-12);
  }
}

TEST_CASE("Cauchy Green matrix is the causal propagator", "[green]") {
  std::mt19937_64 rng(53);
  const CoeffFn A = oracle::random_coefficient(rng, 3, kUnit);
  const GreenMatrix G = green_matrix(A, BoundaryMeasure::initial_value(3, kUnit), kUnit, kTol);
  const Matrizant& Y = G.Y();
  for (double t : {0.1, 0.45, 0.9})
    for (double s : {0.05, 0.45, 0.7}) {
      const CMat expected = s <= t ? Y(t) * Y.inverse(s) : CMat::zero(3);
      CHECK(abs_norm(G(t, s) - expected) <= 1e-8);
    }
}

TEST_CASE("H_Y(b) and [U Y] share one code path", "[green]") {
  std::mt19937_64 rng(54);
  const BVProblem p = oracle::random_problem(rng, 2);
  const GreenMatrix G = green_matrix(p.A, p.U, p.interval, kTol);
  CHECK(G.HYb() == apply_to_matrix(p.U, G.Y()));
  CHECK(G.HYb() == G.HY().inclusive_at_b());
}

TEST_CASE("green_apply reproduces solve_bvp with c = 0", "[green][property]") {
  std::mt19937_64 rng(55);
  for (std::size_t m = 1; m <= 3; ++m) {
    const BVProblem p = oracle::random_problem(rng, m);
    const GreenMatrix G = green_matrix(p.A, p.U, p.interval, kTol);
    const VecFn yg = green_apply(G, p.f);
    const VecFn ys = solve_bvp(p, kTol);
    CHECK(sup_diff(yg, ys) <= 1e-7 * (1.0 + l1_norm(p.f)));
    for (double t : {0.2, 0.61, 0.95}) CHECK(abs_norm(green_apply_at(G, p.f, t) - yg(t)) <= 1e-8 * (1.0 + l1_norm(p.f)));
  }
}

TEST_CASE("unit jump across the diagonal", "[green][property]") {
  std::mt19937_64 rng(56);
  const BVProblem p = oracle::random_problem(rng, 2);
  const GreenMatrix G = green_matrix(p.A, p.U, p.interval, kTol);
  const auto atoms = p.U.atom_locations();
  const double h = 1e-4;
  for (double t : {0.13, 0.42, 0.77}) {
    bool near_atom = false;
    for (double a : atoms) near_atom = near_atom || std::abs(a - t) < 2 * h;
    if (near_atom) continue;
    CHECK(abs_norm(G(t + h, t) - G(t - h, t) - CMat::identity(2)) <= 1e-2);
  }
}

TEST_CASE("columns satisfy the homogeneous boundary condition", "[green][property]") {
  std::mt19937_64 rng(57);
  for (std::size_t m = 1; m <= 3; ++m) {
    const BVProblem p = oracle::random_problem(rng, m);
    const GreenMatrix G = green_matrix(p.A, p.U, p.interval, kTol);
    const auto atoms = p.U.atom_locations();
    for (double s0 : {0.27, 0.66}) {
      if (std::find(atoms.begin(), atoms.end(), s0) != atoms.end()) continue;
      for (std::size_t j = 0; j < m; ++j) {
        const VecFn col{m, kUnit, [&G, s0, j](double t) { return G(t, s0).column(j); }, {}, {}, {s0}};
        CHECK(abs_norm(apply(p.U, col)) <= 1e-7);
      }
    }
  }
}

TEST_CASE("Green table CSV layout", "[green]") {
  const GreenMatrix G = green_matrix(constant_coeff(CMat::zero(2), kUnit), BoundaryMeasure::initial_value(2, kUnit),
                                     kUnit, kTol);
  const auto g = green_grid(kUnit, 3);
  std::ostringstream os;
  write_green_csv(os, tabulate(G, g, g));
  const std::string csv = os.str();
  CHECK(csv.rfind("t,s,g_11_re,g_11_im,g_12_re,g_12_im,g_21_re,g_21_im,g_22_re,g_22_im\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(green_entry_name(9, 10, 12) == "g_10_11");
}
