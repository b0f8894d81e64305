#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"

using namespace bvpgreen;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("smooth integrands", "[quadrature]") {
  CHECK_THAT(integrate([](double t) { return std::exp(t); }, 0.0, 1.0).value, WithinRel(std::exp(1.0) - 1.0, 1e-13));
  CHECK_THAT(integrate([](double t) { return t * t; }, -1.0, 2.0).value, WithinRel(3.0, 1e-14));
  const auto z = integrate([](double t) { return Complex(std::cos(t), std::sin(t)); }, 0.0, std::numbers::pi);
  CHECK_THAT(std::abs(z.value - Complex(0.0, 2.0)), WithinAbs(0.0, 1e-12));
}

TEST_CASE("kinked oscillatory integrand with panel cap", "[quadrature]") {
  const double eps = 1e-3;
  QuadOptions opt;
  opt.max_panel = eps / 4;
  opt.rel_tol = 1e-10;
  const auto r = integrate([eps](double t) { return std::abs(std::cos(t / eps)); }, 0.0, 1.0, opt);
  const double exact = oracle::midpoint([eps](double t) { return std::abs(std::cos(t / eps)); }, 0.0, 1.0, 4'000'000);
  CHECK_THAT(r.value, WithinRel(exact, 1e-8));
}

TEST_CASE("breakpoints are honoured", "[quadrature]") {
  QuadOptions opt;
  opt.breakpoints = {0.3};
  auto step = [](double t) { return t < 0.3 ? 1.0 : 2.0; };
  CHECK_THAT(integrate(step, 0.0, 1.0, opt).value, WithinAbs(0.3 + 1.4, 1e-14));
  const auto edges = initial_edges(0.0, 1.0, opt);
  CHECK(std::find(edges.begin(), edges.end(), 0.3) != edges.end());
}

TEST_CASE("matrix-valued integrands", "[quadrature]") {
  auto f = [](double t) { return CMat{{t, 1.0}, {0.0, Complex(0.0, t * t)}}; };
  const CMat v = integrate(f, 0.0, 1.0).value;
  CHECK_THAT(std::abs(v(0, 0) - 0.5), WithinAbs(0.0, 1e-15));
  CHECK_THAT(std::abs(v(1, 1) - Complex(0.0, 1.0 / 3.0)), WithinAbs(0.0, 1e-15));
}

TEST_CASE("cumulative integral matches closed form everywhere", "[quadrature]") {
  auto f = [](double t) { return std::cos(5.0 * t); };
  const auto F = make_cumulative(f, 0.0, 2.0);
  for (double t = 0.0; t <= 2.0; t += 0.0137) CHECK_THAT(F(t), WithinAbs(std::sin(5.0 * t) / 5.0, 1e-13));
  CHECK_THAT(F(-1.0), WithinAbs(0.0, 0.0));
  CHECK_THAT(F.total(), WithinAbs(std::sin(10.0) / 5.0, 1e-13));
  CHECK_THAT(F(2.0), WithinAbs(F.total(), 0.0));
}

TEST_CASE("rejects empty intervals", "[quadrature]") {
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 1.0), InvalidArgument);
}
