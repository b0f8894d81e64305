#pragma once

// Boundary operators U y = int_a^b [dH(t)] y(t), with H normalized (H(a) = 0,
// left-continuous) and represented by its atoms plus an absolutely
// continuous density: dH = sum_k B_k delta_{t_k} + Phi(t) dt.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "bvpgreen/errors.hpp"
#include "bvpgreen/linalg.hpp"
#include "bvpgreen/ode.hpp"
#include "bvpgreen/quadrature.hpp"

namespace bvpgreen {

struct Atom {
  double location;
  CMat weight;
};

class BoundaryMeasure {
 public:
  BoundaryMeasure() = default;

  /// Atoms are sorted, merged by location and zero weights dropped.
  BoundaryMeasure(std::size_t dim, Interval iv, std::vector<Atom> atoms, std::optional<CoeffFn> density = {})
      : dim_(dim), iv_(iv), density_(std::move(density)) {
    iv_.validate();
    if (dim_ == 0 || dim_ > kMaxDim) throw InvalidArgument("dimension must be in [1, 16]");
    for (const auto& at : atoms) {
      if (at.weight.dim() != dim_) throw DimensionMismatch("atom weight has wrong dimension");
      if (!std::isfinite(at.location) || !iv_.contains(at.location))
        throw InvalidArgument("atom location outside [a, b]");
      if (!at.weight.is_finite()) throw InvalidArgument("atom weight is not finite");
    }
    if (density_) {
      density_->validate();
      if (density_->dim != dim_) throw DimensionMismatch("density has wrong dimension");
    }
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& x, const Atom& y) { return x.location < y.location; });
    for (auto& at : atoms) {
      if (!atoms_.empty() && atoms_.back().location == at.location)
        atoms_.back().weight += at.weight;
      else
        atoms_.push_back(std::move(at));
    }
    std::erase_if(atoms_, [](const Atom& at) { return abs_norm(at.weight) == 0.0; });
  }

  static BoundaryMeasure point(Interval iv, double t, const CMat& weight) {
    return BoundaryMeasure(weight.dim(), iv, {{t, weight}});
  }
  /// U y = y(a).
  static BoundaryMeasure initial_value(std::size_t dim, Interval iv) {
    return point(iv, iv.a, CMat::identity(dim));
  }

  std::size_t dim() const { return dim_; }
  const Interval& interval() const { return iv_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::optional<CoeffFn>& density() const { return density_; }

  std::vector<double> atom_locations() const {
    std::vector<double> out;
    for (const auto& at : atoms_) out.push_back(at.location);
    return out;
  }

  /// Signed measure this - other.
  BoundaryMeasure minus(const BoundaryMeasure& other) const {
    if (other.dim_ != dim_) throw DimensionMismatch("boundary operators differ in dimension");
    std::vector<Atom> merged = atoms_;
    for (const auto& at : other.atoms_) merged.push_back({at.location, -at.weight});
    std::optional<CoeffFn> dens;
    if (density_ && other.density_)
      dens = difference(*density_, *other.density_);
    else if (density_)
      dens = density_;
    else if (other.density_)
      dens = combine(*other.density_, *other.density_, [](const CMat& x, const CMat&) { return -x; });
    return BoundaryMeasure(dim_, iv_, std::move(merged), std::move(dens));
  }

 private:
  std::size_t dim_ = 0;
  Interval iv_;
  std::vector<Atom> atoms_;
  std::optional<CoeffFn> density_;
};

inline constexpr double kBoundaryQuadRelTol = 1e-12;

namespace detail {

template <class V>
QuadOptions boundary_policy(const BoundaryMeasure& U, const TimeFunction<V>& y) {
  const auto& phi = *U.density();
  auto bps = detail::merged_breakpoints(phi.breakpoints, y.breakpoints);
  bps = detail::merged_breakpoints(bps, U.atom_locations());
  return quad_policy(U.interval(), detail::min_scale(phi.oscillation_scale, y.oscillation_scale), bps,
                     kBoundaryQuadRelTol);
}

}  // namespace detail

/// U y for a continuous vector function.
inline CVec apply(const BoundaryMeasure& U, const VecFn& y) {
  if (y.dim != U.dim()) throw DimensionMismatch("apply: dimension mismatch");
  CVec out(U.dim());
  for (const auto& at : U.atoms()) out += at.weight * y(at.location);
  if (U.density()) {
    const auto& phi = *U.density();
    auto integrand = [&](double t) { return phi(t) * y(t); };
    out += integrate(integrand, U.interval().a, U.interval().b, detail::boundary_policy(U, y)).value;
  }
  return out;
}

/// H_Y(t) = int_a^t [dH(s)] Y(s), left-continuous: an atom at t_k counts only
/// for t > t_k. `inclusive_at_b()` adds an atom sitting at b and equals [U Y].
class HTransform {
 public:
  HTransform(const BoundaryMeasure& U, const Matrizant& Y) : iv_(U.interval()), dim_(U.dim()) {
    if (Y.dim() != U.dim()) throw DimensionMismatch("h_transform: dimension mismatch");
    CMat running = CMat::zero(dim_);
    for (const auto& at : U.atoms()) {
      running += at.weight * Y(at.location);
      locations_.push_back(at.location);
      partial_.push_back(running);
    }
    if (U.density()) {
      const auto& phi = *U.density();
      const auto& A = Y.coefficient();
      auto bps = detail::merged_breakpoints(phi.breakpoints, A.breakpoints);
      auto opt = quad_policy(iv_, detail::min_scale(phi.oscillation_scale, A.oscillation_scale), bps,
                             kBoundaryQuadRelTol);
      std::function<CMat(double)> integrand = [phi, Y](double s) { return phi(s) * Y(s); };
      density_part_ = std::make_shared<const CumulativeIntegral<CMat>>(integrand, iv_.a, iv_.b, opt);
    }
  }

  CMat operator()(double t) const {
    CMat out = CMat::zero(dim_);
    // number of atoms strictly left of t
    const auto n = static_cast<std::size_t>(std::lower_bound(locations_.begin(), locations_.end(), t) -
                                            locations_.begin());
    if (n > 0) out += partial_[n - 1];
    if (density_part_) out += (*density_part_)(t);
    return out;
  }

  CMat inclusive_at_b() const {
    CMat out = partial_.empty() ? CMat::zero(dim_) : partial_.back();
    if (density_part_) out += density_part_->total();
    return out;
  }

  std::span<const double> atom_locations() const { return locations_; }
  std::size_t dim() const { return dim_; }

 private:
  Interval iv_;
  std::size_t dim_;
  std::vector<double> locations_;
  std::vector<CMat> partial_;
  std::shared_ptr<const CumulativeIntegral<CMat>> density_part_;
};

inline HTransform h_transform(const BoundaryMeasure& U, const Matrizant& Y) { return HTransform(U, Y); }

/// [U Y]: column i is U applied to column i of Y.
inline CMat apply_to_matrix(const BoundaryMeasure& U, const Matrizant& Y) {
  return HTransform(U, Y).inclusive_at_b();
}

/// sum_k nu(B_k) + int nu(Phi), nu = max column abs-sum.
inline double operator_norm(const BoundaryMeasure& U) {
  double s = 0.0;
  for (const auto& at : U.atoms()) s += induced_norm(at.weight);
  if (U.density()) {
    const auto& phi = *U.density();
    auto integrand = [&phi](double t) { return induced_norm(phi(t)); };
    s += integrate(integrand, U.interval().a, U.interval().b, quad_policy(phi, kL1RelTol)).value;
  }
  return s;
}

inline double variation_distance(const BoundaryMeasure& U1, const BoundaryMeasure& U2) {
  return operator_norm(U1.minus(U2));
}

/// Coordinate probes e_j * phi(t) for phi in {1, t, t^2, sin 3t}.
inline std::vector<VecFn> default_probes(std::size_t dim, Interval iv) {
  std::vector<VecFn> out;
  const std::vector<std::function<double(double)>> shapes = {
      [](double) { return 1.0; }, [](double t) { return t; }, [](double t) { return t * t; },
      [](double t) { return std::sin(3.0 * t); }};
  for (std::size_t j = 0; j < dim; ++j)
    for (const auto& phi : shapes)
      out.push_back(VecFn{dim, iv, [dim, j, phi](double t) {
                            CVec v(dim);
                            v[j] = phi(t);
                            return v;
                          },
                          {}, {}, {}});
  return out;
}

/// max_p |U_eps p - U_0 p| over a finite probe set; a necessary-condition
/// surrogate for strong convergence.
inline double strong_convergence_probe(const BoundaryMeasure& U_eps, const BoundaryMeasure& U_0,
                                       const std::vector<VecFn>& probes) {
  double best = 0.0;
  for (const auto& p : probes) best = std::max(best, abs_norm(apply(U_eps, p) - apply(U_0, p)));
  return best;
}

}  // namespace bvpgreen
