#pragma once

// Adaptive Gauss-Kronrod quadrature over values that are doubles, complex
// scalars, CVec or CMat, plus a tabulated antiderivative built on the same
// panel subdivision.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <queue>
#include <type_traits>
#include <utility>
#include <vector>

#include "bvpgreen/errors.hpp"
#include "bvpgreen/linalg.hpp"

namespace bvpgreen {

namespace detail {

// 15-point Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline constexpr std::array<double, 5> kXgl10 = {0.1488743389816312108848260, 0.4333953941292471907992659,
                                                 0.6794095682990244062343274, 0.8650633666889845107320967,
                                                 0.9739065285171717200779640};
inline constexpr std::array<double, 5> kWgl10 = {0.2955242247147528701738930, 0.2692667193099963550912269,
                                                 0.2190863625159820439955349, 0.1494513491505805931457763,
                                                 0.0666713443086881375935688};

template <class T>
struct GkResult {
  T value;
  double error;
};

template <class T, class F>
GkResult<T> gauss_kronrod15(F& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  T fc = f(c);
  T kron = kWgk[7] * fc;
  T gauss = kWg[3] * fc;
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    T pair = f(c - dx);
    pair += f(c + dx);
    kron += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  kron *= h;
  gauss *= h;
  return {kron, abs_norm(kron - gauss)};
}

template <class T, class F>
T gauss_legendre10(F& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  T s = kWgl10[0] * (f(c - h * kXgl10[0]) + f(c + h * kXgl10[0]));
  for (std::size_t j = 1; j < 5; ++j) s += kWgl10[j] * (f(c - h * kXgl10[j]) + f(c + h * kXgl10[j]));
  s *= h;
  return s;
}

}  // namespace detail

struct QuadOptions {
  double abs_tol = 1e-13;
  /// Relative to the summed panel magnitudes (an L1-like scale).
  double rel_tol = 1e-11;
  /// Upper bound on initial panel width; 0 disables the cap.
  double max_panel = 0.0;
  /// Interior points where the integrand may jump; panels never straddle them.
  std::vector<double> breakpoints;
  std::size_t max_panels = std::size_t{1} << 20;
};

template <class T>
struct Panel {
  double lo;
  double hi;
  T value;
  double error;
};

template <class T>
struct QuadResult {
  T value;
  double error;
  std::size_t panels;
};

/// Initial panel edges: [lo, hi] split at breakpoints, then capped in width.
inline std::vector<double> initial_edges(double lo, double hi, const QuadOptions& opt) {
  std::vector<double> cuts{lo};
  std::vector<double> bps = opt.breakpoints;
  std::sort(bps.begin(), bps.end());
  for (double bp : bps)
    if (bp > cuts.back() && bp < hi) cuts.push_back(bp);
  cuts.push_back(hi);

  std::vector<double> edges{lo};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double w = cuts[i + 1] - cuts[i];
    std::size_t n = 1;
    if (opt.max_panel > 0.0) n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(w / opt.max_panel)));
    for (std::size_t k = 1; k < n; ++k) edges.push_back(cuts[i] + w * static_cast<double>(k) / static_cast<double>(n));
    edges.push_back(cuts[i + 1]);
  }
  return edges;
}

/// Globally adaptive GK15 subdivision. Returns leaf panels ordered by position.
template <class F>
auto adaptive_panels(F&& f, double lo, double hi, const QuadOptions& opt) {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  if (!(hi > lo)) throw InvalidArgument("quadrature interval must satisfy lo < hi");

  const auto edges = initial_edges(lo, hi, opt);
  std::vector<Panel<T>> panels;
  panels.reserve(edges.size() * 2);
  double total_err = 0.0;
  double magnitude = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto r = detail::gauss_kronrod15<T>(f, edges[i], edges[i + 1]);
    total_err += r.error;
    magnitude += abs_norm(r.value);
    panels.push_back({edges[i], edges[i + 1], std::move(r.value), r.error});
  }

  const double min_width = 1e-13 * (hi - lo);
  auto cmp = [&panels](std::size_t x, std::size_t y) { return panels[x].error < panels[y].error; };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> queue(cmp);
  for (std::size_t i = 0; i < panels.size(); ++i) queue.push(i);

  while (!queue.empty() && panels.size() < opt.max_panels) {
    if (total_err <= std::max(opt.abs_tol, opt.rel_tol * magnitude)) break;
    const std::size_t idx = queue.top();
    queue.pop();
    const Panel<T> worst = panels[idx];
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (worst.hi - worst.lo < min_width) continue;  // leaves it unrefined
    auto left = detail::gauss_kronrod15<T>(f, worst.lo, mid);
    auto right = detail::gauss_kronrod15<T>(f, mid, worst.hi);
    total_err += left.error + right.error - worst.error;
    magnitude += abs_norm(left.value) + abs_norm(right.value) - abs_norm(worst.value);
    panels[idx] = {worst.lo, mid, std::move(left.value), left.error};
    panels.push_back({mid, worst.hi, std::move(right.value), right.error});
    queue.push(idx);
    queue.push(panels.size() - 1);
  }
  std::sort(panels.begin(), panels.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
  return panels;
}

template <class F>
auto integrate(F&& f, double lo, double hi, const QuadOptions& opt = {}) {
  auto panels = adaptive_panels(f, lo, hi, opt);
  using T = std::decay_t<decltype(panels.front().value)>;
  T sum = panels.front().value;
  double err = panels.front().error;
  for (std::size_t i = 1; i < panels.size(); ++i) {
    sum += panels[i].value;
    err += panels[i].error;
  }
  return QuadResult<T>{std::move(sum), err, panels.size()};
}

/// Tabulated running integral t -> int_lo^t f(s) ds.
///
/// The adaptive leaves are stored with cumulative sums; evaluation inside a
/// leaf adds a 10-point Gauss-Legendre rule over [leaf.lo, t].
template <class T>
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;

  template <class F>
  CumulativeIntegral(F f, double lo, double hi, const QuadOptions& opt) : lo_(lo), hi_(hi), f_(std::move(f)) {
    auto panels = adaptive_panels(f_, lo, hi, opt);
    edges_.reserve(panels.size() + 1);
    cumulative_.reserve(panels.size() + 1);
    T running = 0.0 * panels.front().value;
    edges_.push_back(lo);
    cumulative_.push_back(running);
    for (auto& p : panels) {
      running += p.value;
      error_ += p.error;
      edges_.push_back(p.hi);
      cumulative_.push_back(running);
    }
    edges_.back() = hi;
  }

  T operator()(double t) const {
    t = std::clamp(t, lo_, hi_);
    auto it = std::upper_bound(edges_.begin(), edges_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - edges_.begin());
    if (k == 0) k = 1;
    const std::size_t i = k - 1;
    if (t == edges_[i] || i + 1 == edges_.size()) return cumulative_[i];
    return cumulative_[i] + detail::gauss_legendre10<T>(f_, edges_[i], t);
  }

  const T& total() const { return cumulative_.back(); }
  double error_estimate() const { return error_; }
  const std::vector<double>& edges() const { return edges_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::function<T(double)> f_;
  std::vector<double> edges_;
  std::vector<T> cumulative_;
  double error_ = 0.0;
};

template <class F>
auto make_cumulative(F f, double lo, double hi, const QuadOptions& opt = {}) {
  using T = std::decay_t<std::invoke_result_t<F&, double>>;
  return CumulativeIntegral<T>(std::move(f), lo, hi, opt);
}

}  // namespace bvpgreen
