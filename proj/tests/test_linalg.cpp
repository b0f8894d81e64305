#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"

using namespace bvpgreen;
using Catch::Matchers::WithinAbs;

TEST_CASE("abs_norm sums entry moduli", "[linalg]") {
  CHECK(abs_norm(CMat::identity(2)) == 2.0);
  CHECK(abs_norm(CMat::zero(3)) == 0.0);
  const CMat a{{1.0, -2.0}, {Complex(0.0, 3.0), 0.0}};
  CHECK_THAT(abs_norm(a), WithinAbs(6.0, 1e-15));
  CHECK(abs_norm(CVec{Complex(3.0, 4.0), -1.0}) == 6.0);
}

TEST_CASE("induced norm is the max column sum", "[linalg]") {
  const CMat a{{1.0, -2.0}, {Complex(0.0, 3.0), 0.5}};
  CHECK_THAT(induced_norm(a), WithinAbs(4.0, 1e-15));
  CHECK(induced_norm(CMat::identity(4)) == 1.0);
}

TEST_CASE("lu_solve on small systems", "[linalg]") {
  const CVec v{1.0, Complex(2.0, -1.0)};
  CHECK(lu_solve(CMat::identity(2), v) == v);
  const CVec x = lu_solve(CMat{{2.0, 0.0}, {0.0, 4.0}}, CVec{2.0, 4.0});
  CHECK_THAT(abs_norm(x - CVec{1.0, 1.0}), WithinAbs(0.0, 1e-15));

  std::mt19937_64 rng(7);
  const CMat M = oracle::random_matrix(rng, 4) + 4.0 * CMat::identity(4);
  const CVec x0 = oracle::random_vector(rng, 4);
  CHECK(abs_norm(lu_solve(M, M * x0) - x0) <= 1e-10 * abs_norm(x0));
}

TEST_CASE("determinant examples", "[linalg]") {
  CHECK(det(CMat::identity(3)) == Complex(1.0));
  const Complex d = det(CMat{{2.0, 0.0}, {0.0, Complex(0.0, 3.0)}});
  CHECK_THAT(std::abs(d - Complex(0.0, 6.0)), WithinAbs(0.0, 1e-14));
  const CMat rep{{1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}, {0.0, 1.0, 5.0}};
  CHECK(std::abs(det(rep)) == 0.0);
}

TEST_CASE("singular matrices are rejected by solve", "[linalg]") {
  const CMat rep{{1.0, 2.0}, {2.0, 4.0}};
  CHECK(LU(rep).singular());
  CHECK_THROWS_AS(lu_solve(rep, CVec{1.0, 1.0}), Singular);
  CHECK_THROWS_AS(inverse(CMat{{1e-20, 0.0}, {0.0, 1.0}}), Singular);
}

TEST_CASE("inverse examples", "[linalg]") {
  CHECK(inverse(CMat::identity(3)) == CMat::identity(3));
  const CMat d = inverse(CMat{{2.0, 0.0}, {0.0, Complex(0.0, 4.0)}});
  CHECK_THAT(std::abs(d(0, 0) - 0.5), WithinAbs(0.0, 1e-15));
  CHECK_THAT(std::abs(d(1, 1) - Complex(0.0, -0.25)), WithinAbs(0.0, 1e-15));
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const CMat M = oracle::random_matrix(rng, 5);
    CHECK(abs_norm(M * inverse(M) - CMat::identity(5)) <= 1e-10 * std::max(1.0, abs_norm(M) * abs_norm(inverse(M))));
  }
}

TEST_CASE("abs_norm is submultiplicative", "[linalg][property]") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const std::size_t m = 1 + static_cast<std::size_t>(k % 6);
    const CMat A = oracle::random_matrix(rng, m);
    const CMat B = oracle::random_matrix(rng, m, 3.0);
    CHECK(abs_norm(A * B) <= abs_norm(A) * abs_norm(B) * (1.0 + 1e-14));
    const CVec x = oracle::random_vector(rng, m);
    CHECK(abs_norm(A * x) <= induced_norm(A) * abs_norm(x) * (1.0 + 1e-14));
  }
}

TEST_CASE("lu_solve round-trips matrix products", "[linalg][property]") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 50; ++k) {
    const std::size_t m = 1 + static_cast<std::size_t>(k % 8);
    const CMat M = oracle::random_matrix(rng, m) + 2.0 * CMat::identity(m);
    const CMat X = oracle::random_matrix(rng, m);
    CHECK(abs_norm(lu_solve(M, M * X) - X) <= 1e-10 * abs_norm(X));
  }
}

TEST_CASE("det is multiplicative and matches cofactor expansion", "[linalg][property]") {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 50; ++k) {
    const CMat A = oracle::random_matrix(rng, 5);
    const CMat B = oracle::random_matrix(rng, 5);
    const Complex dab = det(A * B);
    CHECK(std::abs(dab - det(A) * det(B)) <= 1e-10 * std::abs(dab));
    CHECK(std::abs(det(A) - oracle::det_cofactor(A)) <= 1e-12 * std::max(1.0, std::abs(det(A))));
  }
}

TEST_CASE("dimension checks", "[linalg]") {
  CHECK_THROWS_AS((CMat::identity(2) + CMat::identity(3)), DimensionMismatch);
  CHECK_THROWS_AS((CMat::identity(2) * CVec{1.0, 2.0, 3.0}), DimensionMismatch);
}
