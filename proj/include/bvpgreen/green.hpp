#pragma once

// Inhomogeneous boundary value problems y' = A y + f, U y = c, and their
// Green matrices.
//
// The Green matrix is assembled from the matrizant Y, the transform
// H_Y(t) = int_a^t [dH] Y and K = H_Y(b)^{-1}:
//
//   G(t, s) = G2(t, s) + G1(t, s)
//   G2(t, s) = Y(t) Y^{-1}(s)                       for s <= t, 0 otherwise
//   G1(t, s) = -Y(t) K [H_Y(b) - H_Y(s)] Y^{-1}(s)
//
// H_Y(b) - H_Y(s) is the tail transform int_s^b [dH] Y, so every column of
// G(., s) satisfies U G(., s) = 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "bvpgreen/boundary.hpp"
#include "bvpgreen/errors.hpp"
#include "bvpgreen/linalg.hpp"
#include "bvpgreen/ode.hpp"
#include "bvpgreen/quadrature.hpp"

namespace bvpgreen {

struct BVProblem {
  Interval interval;
  CoeffFn A;
  VecFn f;
  BoundaryMeasure U;
  CVec c;

  std::size_t dim() const { return A.dim; }

  void validate() const {
    interval.validate();
    A.validate();
    f.validate();
    const std::size_t m = A.dim;
    if (f.dim != m || U.dim() != m || c.dim() != m) throw DimensionMismatch("BVP parts differ in dimension");
    if (!(A.domain == interval) || !(f.domain == interval) || !(U.interval() == interval))
      throw InvalidArgument("BVP parts are defined on different intervals");
    if (!c.is_finite()) throw InvalidArgument("boundary data c is not finite");
  }
};

/// Relative well-posedness threshold on |det [U Y]|.
inline constexpr double kWellposedRelTol = 1e-10;

struct WellposedCheck {
  CMat UY;
  Complex determinant;
  /// 1e-10 times the product of row sums of the cancellation-free bound
  /// sum_k |B_k| |Y(t_k)| + int |Phi| |Y| on [U Y].
  double threshold;

  bool ok() const { return std::abs(determinant) > threshold; }
};

inline WellposedCheck assess_wellposed(const BoundaryMeasure& U, const Matrizant& Y) {
  const std::size_t m = U.dim();
  WellposedCheck out{apply_to_matrix(U, Y), 0.0, 0.0};
  out.determinant = det(out.UY);

  CMat bound = CMat::zero(m);
  for (const auto& at : U.atoms()) bound += abs_entries(at.weight) * abs_entries(Y(at.location));
  if (U.density()) {
    const auto& phi = *U.density();
    auto integrand = [&](double s) { return abs_entries(phi(s)) * abs_entries(Y(s)); };
    bound += integrate(integrand, U.interval().a, U.interval().b, quad_policy(phi, 1e-6)).value;
  }
  double prod = kWellposedRelTol;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) row += std::abs(bound(i, j));
    prod *= row;
  }
  out.threshold = prod;
  return out;
}

/// det [U Y] for the matrizant of A.
inline Complex check_wellposed(const CoeffFn& A, const BoundaryMeasure& U, Interval iv, double tol) {
  return det(apply_to_matrix(U, matrizant(A, iv, tol)));
}

struct BvpSolution {
  VecFn y;
  Matrizant Y;
  VecFn x;
  CVec c_tilde;
  WellposedCheck wellposed;
};

/// y = Y c~ + x, with x the Cauchy solution and [U Y] c~ = c - U x.
inline BvpSolution solve_bvp_full(const BVProblem& p, double tol) {
  p.validate();
  Matrizant Y = matrizant(p.A, p.interval, tol);
  auto check = assess_wellposed(p.U, Y);
  if (!check.ok())
    throw NonUnique("homogeneous problem is degenerate: |det [U Y]| = " + std::to_string(std::abs(check.determinant)) +
                    " <= " + std::to_string(check.threshold));
  VecFn x = cauchy_solution(p.A, p.f, p.interval, tol);
  CVec c_tilde = lu_solve(check.UY, p.c - apply(p.U, x));

  VecFn y;
  y.dim = p.dim();
  y.domain = p.interval;
  y.eval = [Y, x, c_tilde](double t) { return Y(t) * c_tilde + x(t); };
  y.oscillation_scale = x.oscillation_scale;
  y.breakpoints = x.breakpoints;

  const double residual = abs_norm(apply(p.U, y) - p.c);
  if (residual > 1e-7 * (1.0 + abs_norm(p.c)))
    throw NumericalFailure("boundary residual " + std::to_string(residual) + " exceeds 1e-7 (1 + |c|)");
  return {std::move(y), std::move(Y), std::move(x), std::move(c_tilde), std::move(check)};
}

inline VecFn solve_bvp(const BVProblem& p, double tol) { return solve_bvp_full(p, tol).y; }

class GreenMatrix {
 public:
  GreenMatrix(Matrizant Y, const BoundaryMeasure& U)
      : Y_(std::move(Y)), U_(U), HY_(U_, Y_), check_(assess_wellposed(U_, Y_)) {
    HYb_ = HY_.inclusive_at_b();
    if (!check_.ok())
      throw SingularBoundary("det H_Y(b) vanishes: |det| = " + std::to_string(std::abs(check_.determinant)));
    HYb_inv_ = inverse(HYb_);
  }

  std::size_t dim() const { return Y_.dim(); }
  const Interval& interval() const { return Y_.interval(); }
  const Matrizant& Y() const { return Y_; }
  const HTransform& HY() const { return HY_; }
  const BoundaryMeasure& U() const { return U_; }
  const CMat& HYb() const { return HYb_; }
  const CMat& HYb_inv() const { return HYb_inv_; }
  const WellposedCheck& wellposed() const { return check_; }

  /// H_Y(b)^{-1} [H_Y(b) - H_Y(s)] Y^{-1}(s).
  CMat tail_factor(double s) const { return HYb_inv_ * (HYb_ - HY_(s)) * Y_.inverse(s); }

  CMat g1(double t, double s) const { return -(Y_(t) * tail_factor(s)); }
  CMat g2(double t, double s) const {
    if (s <= t) return Y_(t) * Y_.inverse(s);
    return CMat::zero(dim());
  }

  /// The diagonal s == t takes the s <= t branch.
  CMat operator()(double t, double s) const {
    CMat inner = -tail_factor(s);
    if (s <= t) inner += Y_.inverse(s);
    return Y_(t) * inner;
  }

 private:
  Matrizant Y_;
  BoundaryMeasure U_;
  HTransform HY_;
  WellposedCheck check_;
  CMat HYb_;
  CMat HYb_inv_;
};

inline GreenMatrix green_matrix(const CoeffFn& A, const BoundaryMeasure& U, Interval iv, double tol) {
  return GreenMatrix(matrizant(A, iv, tol), U);
}

inline constexpr double kGreenQuadRelTol = 1e-12;

/// y(t) = int_a^b G(t, s) f(s) ds.
///
/// Uses the split G = G2 + G1 with Y(t) factored out of the s-integral:
///   y(t) = Y(t) [ int_a^t Y^{-1} f ds - int_a^b K (H_Y(b) - H_Y(s)) Y^{-1} f ds ].
/// Panels are cut at the atoms of H and at the breakpoints of A and f.
inline VecFn green_apply(const GreenMatrix& G, const VecFn& f) {
  if (f.dim != G.dim()) throw DimensionMismatch("green_apply: dimension mismatch");
  const Interval iv = G.interval();
  const auto& A = G.Y().coefficient();
  auto bps = detail::merged_breakpoints(A.breakpoints, f.breakpoints);
  bps = detail::merged_breakpoints(bps, G.U().atom_locations());
  if (G.U().density()) bps = detail::merged_breakpoints(bps, G.U().density()->breakpoints);
  auto scale = detail::min_scale(A.oscillation_scale, f.oscillation_scale);
  const QuadOptions opt = quad_policy(iv, scale, bps, kGreenQuadRelTol);

  const Matrizant Y = G.Y();
  std::function<CVec(double)> causal = [Y, f](double s) { return Y.inverse(s) * f(s); };
  auto running = std::make_shared<const CumulativeIntegral<CVec>>(causal, iv.a, iv.b, opt);
  auto tail = [&G, &f](double s) { return G.tail_factor(s) * f(s); };
  const CVec boundary_part = integrate(tail, iv.a, iv.b, opt).value;

  VecFn y;
  y.dim = f.dim;
  y.domain = iv;
  y.eval = [Y, running, boundary_part](double t) { return Y(t) * ((*running)(t) - boundary_part); };
  y.oscillation_scale = scale;
  return y;
}

/// Direct quadrature of s -> G(t, s) f(s) at one t, cut at t and at atoms.
inline CVec green_apply_at(const GreenMatrix& G, const VecFn& f, double t) {
  const Interval iv = G.interval();
  auto bps = detail::merged_breakpoints(G.U().atom_locations(), f.breakpoints);
  bps = detail::merged_breakpoints(bps, G.Y().coefficient().breakpoints);
  bps.push_back(t);
  auto opt = quad_policy(iv, detail::min_scale(G.Y().coefficient().oscillation_scale, f.oscillation_scale), bps,
                         kGreenQuadRelTol);
  const CMat Yt = G.Y()(t);
  auto integrand = [&](double s) {
    CMat inner = -G.tail_factor(s);
    if (s <= t) inner += G.Y().inverse(s);
    return Yt * (inner * f(s));
  };
  return integrate(integrand, iv.a, iv.b, opt).value;
}

// ---------------------------------------------------------------------------
// Grid tabulation
// ---------------------------------------------------------------------------

inline constexpr std::size_t kDefaultGreenGrid = 201;

/// n cell midpoints of [a, b], nudged off the given points (atom locations).
inline std::vector<double> green_grid(const Interval& iv, std::size_t n, std::span<const double> avoid = {}) {
  if (n < 1) throw InvalidArgument("green grid needs at least one point");
  const double h = iv.length() / static_cast<double>(n);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = iv.a + (static_cast<double>(i) + 0.5) * h;
    for (double p : avoid)
      if (std::abs(t - p) < 1e-9 * h) t += 1e-3 * h;
    g[i] = t;
  }
  return g;
}

struct GreenTable {
  std::vector<double> t;
  std::vector<double> s;
  std::size_t dim = 0;
  /// values[i * s.size() + j] = G(t[i], s[j])
  std::vector<CMat> values;

  const CMat& at(std::size_t i, std::size_t j) const { return values[i * s.size() + j]; }
};

/// Tabulates G on t x s, evaluating Y(t), Y^{-1}(s) and the tail factor once
/// per grid coordinate.
inline GreenTable tabulate(const GreenMatrix& G, std::vector<double> t, std::vector<double> s) {
  GreenTable out{std::move(t), std::move(s), G.dim(), {}};
  std::vector<CMat> Yt;
  std::vector<CMat> Yinv;
  std::vector<CMat> tail;
  Yt.reserve(out.t.size());
  for (double ti : out.t) Yt.push_back(G.Y()(ti));
  for (double sj : out.s) {
    Yinv.push_back(G.Y().inverse(sj));
    tail.push_back(G.tail_factor(sj));
  }
  out.values.reserve(out.t.size() * out.s.size());
  for (std::size_t i = 0; i < out.t.size(); ++i)
    for (std::size_t j = 0; j < out.s.size(); ++j) {
      CMat inner = -tail[j];
      if (out.s[j] <= out.t[i]) inner += Yinv[j];
      out.values.push_back(Yt[i] * inner);
    }
  return out;
}

/// Largest entrywise-sum distance between two tables on the same grid.
inline double max_abs_difference(const GreenTable& x, const GreenTable& y) {
  if (x.values.size() != y.values.size()) throw DimensionMismatch("green tables differ in shape");
  double best = 0.0;
  for (std::size_t k = 0; k < x.values.size(); ++k) best = std::max(best, abs_norm(x.values[k] - y.values[k]));
  return best;
}

/// Round-trippable decimal: 17 significant digits, '.' separator.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string green_entry_name(std::size_t i, std::size_t j, std::size_t m) {
  if (m <= 9) return "g_" + std::to_string(i + 1) + std::to_string(j + 1);
  return "g_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

/// CSV: t, s, then (re, im) per entry in row-major order.
inline void write_green_csv(std::ostream& os, const GreenTable& table) {
  const std::size_t m = table.dim;
  os << "t,s";
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const auto name = green_entry_name(i, j, m);
      os << ',' << name << "_re," << name << "_im";
    }
  os << '\n';
  for (std::size_t a = 0; a < table.t.size(); ++a)
    for (std::size_t b = 0; b < table.s.size(); ++b) {
      os << format_double(table.t[a]) << ',' << format_double(table.s[b]);
      const CMat& g = table.at(a, b);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
          os << ',' << format_double(g(i, j).real()) << ',' << format_double(g(i, j).imag());
      os << '\n';
    }
}

}  // namespace bvpgreen
