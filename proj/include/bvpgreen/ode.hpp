#pragma once

// Linear ODE machinery on a compact interval: coefficient functions, the
// matrizant Y' = A Y, Y(a) = I, Cauchy solutions x' = A x + f, x(a) = 0,
// running integrals and the L1 / sup functional norms.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bvpgreen/errors.hpp"
#include "bvpgreen/linalg.hpp"
#include "bvpgreen/quadrature.hpp"

namespace bvpgreen {

struct Interval {
  double a = 0.0;
  double b = 1.0;

  double length() const { return b - a; }
  bool contains(double t) const { return t >= a && t <= b; }
  void validate() const {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
      throw InvalidArgument("interval requires finite a < b");
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Evaluable t -> value on an interval, with hints for the integrators.
///
/// `breakpoints` must list every interior point where the function jumps;
/// integrators and quadrature never step across one. `oscillation_scale` is
/// the smallest feature wavelength, when known.
template <class V>
struct TimeFunction {
  std::size_t dim = 0;
  Interval domain;
  std::function<V(double)> eval;
  std::optional<double> oscillation_scale;
  std::optional<double> l1_bound;
  std::vector<double> breakpoints;

  V operator()(double t) const { return eval(t); }

  void validate() const {
    domain.validate();
    if (dim == 0 || dim > kMaxDim) throw InvalidArgument("dimension must be in [1, 16]");
    if (!eval) throw InvalidArgument("time function has no evaluator");
    if (oscillation_scale && !(*oscillation_scale > 0.0))
      throw InvalidArgument("oscillation_scale must be positive");
  }
};

using CoeffFn = TimeFunction<CMat>;
using VecFn = TimeFunction<CVec>;

inline CoeffFn constant_coeff(const CMat& value, Interval domain) {
  return CoeffFn{value.dim(), domain, [value](double) { return value; }, {}, {}, {}};
}
inline VecFn constant_vec(const CVec& value, Interval domain) {
  return VecFn{value.dim(), domain, [value](double) { return value; }, {}, {}, {}};
}

namespace detail {

inline std::optional<double> min_scale(std::optional<double> x, std::optional<double> y) {
  if (x && y) return std::min(*x, *y);
  return x ? x : y;
}

inline std::vector<double> merged_breakpoints(std::vector<double> x, const std::vector<double>& y) {
  x.insert(x.end(), y.begin(), y.end());
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

}  // namespace detail

/// Pointwise combination of two time functions; hints are merged.
template <class V, class W, class Op>
auto combine(const TimeFunction<V>& x, const TimeFunction<W>& y, Op op) {
  using R = std::decay_t<std::invoke_result_t<Op&, const V&, const W&>>;
  if (x.dim != y.dim) throw DimensionMismatch("combined functions differ in dimension");
  TimeFunction<R> out;
  out.dim = x.dim;
  out.domain = x.domain;
  out.eval = [fx = x.eval, fy = y.eval, op](double t) { return op(fx(t), fy(t)); };
  out.oscillation_scale = detail::min_scale(x.oscillation_scale, y.oscillation_scale);
  out.breakpoints = detail::merged_breakpoints(x.breakpoints, y.breakpoints);
  return out;
}

template <class V>
TimeFunction<V> difference(const TimeFunction<V>& x, const TimeFunction<V>& y) {
  return combine(x, y, [](const V& u, const V& v) { return u - v; });
}

/// Quadrature policy shared by every integral over a time function.
inline QuadOptions quad_policy(const Interval& iv, std::optional<double> oscillation_scale,
                               const std::vector<double>& breakpoints, double rel_tol) {
  QuadOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-3 * rel_tol;
  opt.max_panel = iv.length() / 8.0;
  if (oscillation_scale) opt.max_panel = std::min(opt.max_panel, *oscillation_scale / 4.0);
  opt.breakpoints = breakpoints;
  return opt;
}

template <class V>
QuadOptions quad_policy(const TimeFunction<V>& fn, double rel_tol) {
  return quad_policy(fn.domain, fn.oscillation_scale, fn.breakpoints, rel_tol);
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) integration of X' = A(t) X + F(t), X(a) = X0.
// ---------------------------------------------------------------------------

namespace detail {

struct DormandPrince {
  static constexpr std::array<double, 7> c = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace detail

/// Trajectory of the linear system X' = A X + [0 ... 0 f], stored at the
/// accepted step nodes. X is m x k, column-major; the forcing (if any) acts on
/// the last column. Dense values between nodes come from one fixed
/// fifth-order step taken from the preceding node.
class LinearFlow {
 public:
  static constexpr double kMinTol = 1e-12;
  static constexpr double kMaxTol = 1e-2;
  static constexpr double kStepsPerWavelength = 20.0;

  LinearFlow(CoeffFn A, std::optional<VecFn> f, std::vector<Complex> x0, std::size_t cols, Interval iv,
             double tol)
      : A_(std::move(A)), f_(std::move(f)), m_(A_.dim), k_(cols), iv_(iv), tol_(tol) {
    iv_.validate();
    A_.validate();
    if (!(tol >= kMinTol && tol <= kMaxTol)) throw InvalidArgument("tol must lie in [1e-12, 1e-2]");
    if (x0.size() != m_ * k_) throw DimensionMismatch("initial state has wrong size");
    if (f_ && f_->dim != m_) throw DimensionMismatch("forcing dimension differs from coefficient");
    if (iv_.a < A_.domain.a - 1e-12 * A_.domain.length() || iv_.b > A_.domain.b + 1e-12 * A_.domain.length())
      throw InvalidArgument("integration interval exceeds the coefficient domain");
    run(std::move(x0));
  }

  std::size_t dim() const { return m_; }
  std::size_t cols() const { return k_; }
  const Interval& interval() const { return iv_; }
  double tol() const { return tol_; }
  double achieved_tol() const { return achieved_; }
  std::span<const double> nodes() const { return nodes_; }
  const CoeffFn& coefficient() const { return A_; }

  std::span<const Complex> state_at_node(std::size_t i) const {
    return std::span<const Complex>(states_).subspan(i * m_ * k_, m_ * k_);
  }

  /// Dense state at t (clamped into the interval).
  std::vector<Complex> state(double t) const {
    t = std::clamp(t, iv_.a, iv_.b);
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
    i = (i == 0) ? 0 : i - 1;
    auto x = state_at_node(i);
    std::vector<Complex> out(x.begin(), x.end());
    const double h = t - nodes_[i];
    if (h == 0.0) return out;
    Work w(m_ * k_);
    rhs(nodes_[i], out, w.k[0]);
    stages(nodes_[i], h, out, w);
    for (std::size_t j = 0; j < out.size(); ++j)
      out[j] += h * (DP::b1 * w.k[0][j] + DP::b3 * w.k[2][j] + DP::b4 * w.k[3][j] + DP::b5 * w.k[4][j] +
                     DP::b6 * w.k[5][j]);
    return out;
  }

 private:
  using DP = detail::DormandPrince;

  struct Work {
    explicit Work(std::size_t n) {
      for (auto& v : k) v.assign(n, Complex{});
      tmp.assign(n, Complex{});
      next.assign(n, Complex{});
    }
    std::array<std::vector<Complex>, 7> k;
    std::vector<Complex> tmp;
    std::vector<Complex> next;
  };

  void rhs(double t, std::span<const Complex> x, std::vector<Complex>& out) const {
    const CMat a = A_(t);
    if (a.dim() != m_ || !a.is_finite()) throw NumericalFailure("coefficient is not finite at t=" + std::to_string(t));
    for (std::size_t col = 0; col < k_; ++col) {
      const Complex* xc = x.data() + col * m_;
      Complex* oc = out.data() + col * m_;
      for (std::size_t i = 0; i < m_; ++i) {
        Complex s = 0.0;
        for (std::size_t j = 0; j < m_; ++j) s += a(i, j) * xc[j];
        oc[i] = s;
      }
    }
    if (f_) {
      const CVec fv = (*f_)(t);
      if (!fv.is_finite()) throw NumericalFailure("forcing is not finite at t=" + std::to_string(t));
      Complex* oc = out.data() + (k_ - 1) * m_;
      for (std::size_t i = 0; i < m_; ++i) oc[i] += fv[i];
    }
  }

  // Fills k[1..5] given k[0] = rhs(t, x); k[6] is left to the caller.
  void stages(double t, double h, std::span<const Complex> x, Work& w) const {
    const std::size_t n = x.size();
    auto& k = w.k;
    auto& tmp = w.tmp;
    for (std::size_t j = 0; j < n; ++j) tmp[j] = x[j] + h * DP::a21 * k[0][j];
    rhs(t + DP::c[1] * h, tmp, k[1]);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = x[j] + h * (DP::a31 * k[0][j] + DP::a32 * k[1][j]);
    rhs(t + DP::c[2] * h, tmp, k[2]);
    for (std::size_t j = 0; j < n; ++j)
      tmp[j] = x[j] + h * (DP::a41 * k[0][j] + DP::a42 * k[1][j] + DP::a43 * k[2][j]);
    rhs(t + DP::c[3] * h, tmp, k[3]);
    for (std::size_t j = 0; j < n; ++j)
      tmp[j] = x[j] + h * (DP::a51 * k[0][j] + DP::a52 * k[1][j] + DP::a53 * k[2][j] + DP::a54 * k[3][j]);
    rhs(t + DP::c[4] * h, tmp, k[4]);
    for (std::size_t j = 0; j < n; ++j)
      tmp[j] = x[j] + h * (DP::a61 * k[0][j] + DP::a62 * k[1][j] + DP::a63 * k[2][j] + DP::a64 * k[3][j] +
                           DP::a65 * k[4][j]);
    rhs(t + DP::c[5] * h, tmp, k[5]);
  }

  void run(std::vector<Complex> x) {
    const std::size_t n = x.size();
    const double len = iv_.length();
    const double h_min = 1e-14 * len;
    double h_max = len / 8.0;
    if (A_.oscillation_scale) h_max = std::min(h_max, *A_.oscillation_scale / kStepsPerWavelength);
    if (f_ && f_->oscillation_scale) h_max = std::min(h_max, *f_->oscillation_scale / kStepsPerWavelength);

    std::vector<double> stops;
    for (double bp : detail::merged_breakpoints(A_.breakpoints, f_ ? f_->breakpoints : std::vector<double>{}))
      if (bp > iv_.a && bp < iv_.b) stops.push_back(bp);
    stops.push_back(iv_.b);

    nodes_.push_back(iv_.a);
    states_.insert(states_.end(), x.begin(), x.end());

    Work w(n);
    double t = iv_.a;
    double h = std::min(h_max, 0.01 * len / (1.0 + induced_norm(A_(t)) * len));
    double err_prev = 1e-4;
    bool rejected = false;
    rhs(t, x, w.k[0]);

    for (double stop : stops) {
      while (t < stop) {
        double step = std::min(h, h_max);
        bool lands = false;
        if (t + step >= stop - 1e-13 * len) {
          step = stop - t;
          lands = true;
        }
        if (step < h_min) throw StepUnderflow("required step fell below 1e-14 (b - a) at t=" + std::to_string(t));

        stages(t, step, x, w);
        for (std::size_t j = 0; j < n; ++j)
          w.next[j] = x[j] + step * (DP::b1 * w.k[0][j] + DP::b3 * w.k[2][j] + DP::b4 * w.k[3][j] +
                                     DP::b5 * w.k[4][j] + DP::b6 * w.k[5][j]);
        const double t_next = lands ? stop : t + step;
        rhs(t_next, w.next, w.k[6]);

        double sq = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          const Complex e = step * (DP::e1 * w.k[0][j] + DP::e3 * w.k[2][j] + DP::e4 * w.k[3][j] +
                                    DP::e5 * w.k[4][j] + DP::e6 * w.k[5][j] + DP::e7 * w.k[6][j]);
          const double sc = tol_ * (1.0 + std::max(std::abs(x[j]), std::abs(w.next[j])));
          const double r = std::abs(e) / sc;
          sq += r * r;
        }
        const double err = std::sqrt(sq / static_cast<double>(n));

        if (err <= 1.0) {
          achieved_ = std::max(achieved_, err * tol_);
          t = t_next;
          x.swap(w.next);
          w.k[0].swap(w.k[6]);
          nodes_.push_back(t);
          states_.insert(states_.end(), x.begin(), x.end());
          const double e = std::max(err, 1e-10);
          double fac = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
          fac = std::clamp(fac, 0.2, rejected ? 1.0 : 5.0);
          // A clipped landing step says nothing about the natural step size.
          if (!lands || step >= h) h = step * fac;
          err_prev = e;
          rejected = false;
        } else {
          h = step * std::max(0.2, 0.9 * std::pow(err, -0.2));
          rejected = true;
        }
      }
    }
    nodes_.back() = iv_.b;
  }

  CoeffFn A_;
  std::optional<VecFn> f_;
  std::size_t m_;
  std::size_t k_;
  Interval iv_;
  double tol_;
  double achieved_ = 0.0;
  std::vector<double> nodes_;
  std::vector<Complex> states_;
};

namespace detail {

inline CMat to_mat(std::span<const Complex> colmajor, std::size_t m) {
  CMat out(m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) out(i, j) = colmajor[j * m + i];
  return out;
}

}  // namespace detail

/// Fundamental matrix Y of Y' = A Y with Y(a) = I on an interval.
///
/// Cheap to copy; copies share the immutable node table.
class Matrizant {
 public:
  Matrizant(const CoeffFn& A, Interval iv, double tol) {
    std::vector<Complex> id(A.dim * A.dim);
    for (std::size_t i = 0; i < A.dim; ++i) id[i * A.dim + i] = 1.0;
    flow_ = std::make_shared<const LinearFlow>(A, std::nullopt, std::move(id), A.dim, iv, tol);
  }

  std::size_t dim() const { return flow_->dim(); }
  const Interval& interval() const { return flow_->interval(); }
  double tol() const { return flow_->tol(); }
  double achieved_tol() const { return flow_->achieved_tol(); }
  std::span<const double> nodes() const { return flow_->nodes(); }
  const CoeffFn& coefficient() const { return flow_->coefficient(); }

  CMat at_node(std::size_t i) const { return detail::to_mat(flow_->state_at_node(i), dim()); }
  CMat operator()(double t) const { return detail::to_mat(flow_->state(t), dim()); }
  /// Y(t)^{-1} by LU inversion of the dense value.
  CMat inverse(double t) const { return bvpgreen::inverse((*this)(t)); }

 private:
  std::shared_ptr<const LinearFlow> flow_;
};

inline Matrizant matrizant(const CoeffFn& A, Interval iv, double tol) { return Matrizant(A, iv, tol); }
inline Matrizant matrizant(const CoeffFn& A, double tol) { return Matrizant(A, A.domain, tol); }

/// t -> Y(t)^{-1} as a coefficient-shaped function.
inline CoeffFn inverse_matrizant(const Matrizant& Y) {
  CoeffFn out;
  out.dim = Y.dim();
  out.domain = Y.interval();
  out.eval = [Y](double t) { return Y.inverse(t); };
  out.oscillation_scale = Y.coefficient().oscillation_scale;
  out.breakpoints = Y.coefficient().breakpoints;
  return out;
}

/// x with x' = A x + f, x(a) = 0.
inline VecFn cauchy_solution(const CoeffFn& A, const VecFn& f, Interval iv, double tol) {
  auto flow = std::make_shared<const LinearFlow>(A, f, std::vector<Complex>(A.dim), 1, iv, tol);
  VecFn out;
  out.dim = A.dim;
  out.domain = iv;
  out.eval = [flow](double t) { return CVec(flow->state(t)); };
  out.oscillation_scale = detail::min_scale(A.oscillation_scale, f.oscillation_scale);
  out.breakpoints = detail::merged_breakpoints(A.breakpoints, f.breakpoints);
  return out;
}

/// Accuracy target of running integrals, relative to 1 + the L1 norm.
inline constexpr double kAntiderivativeRelTol = 1e-12;

/// t -> int_a^t R(s) ds, tabulated once and evaluated in O(log N).
template <class V>
TimeFunction<V> antiderivative(const TimeFunction<V>& R) {
  R.validate();
  auto table = std::make_shared<const CumulativeIntegral<V>>(
      R.eval, R.domain.a, R.domain.b, quad_policy(R, kAntiderivativeRelTol));
  TimeFunction<V> out;
  out.dim = R.dim;
  out.domain = R.domain;
  out.eval = [table](double t) { return (*table)(t); };
  out.oscillation_scale = R.oscillation_scale;
  // Continuous, so no breakpoints survive.
  return out;
}

inline constexpr double kL1RelTol = 1e-9;

/// int_a^b |R(s)| ds with the entrywise-sum norm.
template <class V>
double l1_norm(const TimeFunction<V>& R) {
  R.validate();
  auto integrand = [&R](double t) { return abs_norm(R(t)); };
  return integrate(integrand, R.domain.a, R.domain.b, quad_policy(R, kL1RelTol)).value;
}

// ---------------------------------------------------------------------------
// sup norms
// ---------------------------------------------------------------------------

inline constexpr std::size_t kDefaultSupGrid = 2001;

inline std::vector<double> uniform_grid(const Interval& iv, std::size_t n) {
  if (n < 2) throw InvalidArgument("grid needs at least 2 points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = iv.a + iv.length() * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = iv.b;
  return g;
}

/// Sorted union of a uniform grid with extra points inside the interval.
inline std::vector<double> merged_grid(const Interval& iv, std::size_t n, std::span<const double> extra) {
  auto g = uniform_grid(iv, n);
  for (double t : extra)
    if (iv.contains(t)) g.push_back(t);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

/// max |F(t)| over the given points.
template <class F>
double sup_norm_at(F&& fn, std::span<const double> points) {
  double best = 0.0;
  for (double t : points) best = std::max(best, abs_norm(fn(t)));
  return best;
}

/// Golden-section search for a maximum of |F| on [lo, hi].
template <class F>
double golden_max(F&& fn, double lo, double hi, double xtol) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = abs_norm(fn(x1));
  double f2 = abs_norm(fn(x2));
  for (int it = 0; it < 80 && hi - lo > xtol; ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = abs_norm(fn(x1));
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = abs_norm(fn(x2));
    }
  }
  return std::max(f1, f2);
}

/// max |F| over sorted points, with the `peaks` largest discrete local maxima
/// refined by golden-section search over their two neighbouring cells.
template <class F>
double refined_sup(F&& fn, std::span<const double> points, std::size_t peaks = 4) {
  if (points.empty()) return 0.0;
  std::vector<double> v(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) v[i] = abs_norm(fn(points[i]));
  std::vector<std::size_t> local;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool left = i == 0 || v[i] >= v[i - 1];
    const bool right = i + 1 == v.size() || v[i] >= v[i + 1];
    if (left && right) local.push_back(i);
  }
  std::sort(local.begin(), local.end(), [&](std::size_t x, std::size_t y) { return v[x] > v[y]; });
  if (local.size() > peaks) local.resize(peaks);
  double best = *std::max_element(v.begin(), v.end());
  const double xtol = 1e-14 * std::max(1.0, points.back() - points.front());
  for (std::size_t i : local) {
    const double lo = points[i == 0 ? 0 : i - 1];
    const double hi = points[std::min(i + 1, points.size() - 1)];
    if (hi > lo) best = std::max(best, golden_max(fn, lo, hi, xtol));
  }
  return best;
}

/// Grid maximum of |F| over a uniform grid, refined near the largest peaks.
template <class F>
double sup_norm(F&& fn, const Interval& iv, std::size_t grid_size = kDefaultSupGrid) {
  const auto grid = uniform_grid(iv, grid_size);
  return refined_sup(fn, grid);
}

}  // namespace bvpgreen
