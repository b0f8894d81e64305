#pragma once

// Dense complex linear algebra for small systems (m <= 16).
//
// CMat is an m x m matrix, CVec an m-vector; both own their storage and are
// plain values. The norm |X| used throughout is the entrywise absolute sum.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bvpgreen/errors.hpp"

namespace bvpgreen {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDim = 16;

class CVec {
 public:
  CVec() = default;
  explicit CVec(std::size_t m) : data_(m) {}
  CVec(std::initializer_list<Complex> values) : data_(values) {}
  explicit CVec(std::vector<Complex> values) : data_(std::move(values)) {}

  static CVec zero(std::size_t m) { return CVec(m); }
  static CVec unit(std::size_t m, std::size_t k) {
    CVec v(m);
    v[k] = 1.0;
    return v;
  }

  std::size_t dim() const { return data_.size(); }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }
  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  bool is_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  CVec& operator+=(const CVec& o) {
    require_same(o);
    for (std::size_t i = 0; i < dim(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  CVec& operator-=(const CVec& o) {
    require_same(o);
    for (std::size_t i = 0; i < dim(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  CVec& operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend bool operator==(const CVec&, const CVec&) = default;

 private:
  void require_same(const CVec& o) const {
    if (o.dim() != dim()) throw DimensionMismatch("CVec dimension mismatch");
  }
  std::vector<Complex> data_;
};

class CMat {
 public:
  CMat() = default;
  explicit CMat(std::size_t m) : m_(m), data_(m * m) {}
  /// Row-major nested initializer: CMat{{1, 2}, {3, 4}}.
  CMat(std::initializer_list<std::initializer_list<Complex>> rows) : m_(rows.size()), data_() {
    data_.reserve(m_ * m_);
    for (const auto& r : rows) {
      if (r.size() != m_) throw DimensionMismatch("CMat initializer is not square");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static CMat zero(std::size_t m) { return CMat(m); }
  static CMat identity(std::size_t m) {
    CMat id(m);
    for (std::size_t i = 0; i < m; ++i) id(i, i) = 1.0;
    return id;
  }
  static CMat diagonal(std::span<const Complex> d) {
    CMat out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) out(i, i) = d[i];
    return out;
  }

  std::size_t dim() const { return m_; }
  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * m_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * m_ + j]; }
  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  CVec column(std::size_t j) const {
    CVec c(m_);
    for (std::size_t i = 0; i < m_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void set_column(std::size_t j, const CVec& c) {
    for (std::size_t i = 0; i < m_; ++i) (*this)(i, j) = c[i];
  }

  Complex trace() const {
    Complex s = 0.0;
    for (std::size_t i = 0; i < m_; ++i) s += (*this)(i, i);
    return s;
  }

  bool is_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  CMat& operator+=(const CMat& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  CMat& operator-=(const CMat& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  CMat& operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend bool operator==(const CMat&, const CMat&) = default;

 private:
  void require_same(const CMat& o) const {
    if (o.m_ != m_) throw DimensionMismatch("CMat dimension mismatch");
  }
  std::size_t m_ = 0;
  std::vector<Complex> data_;
};

// -- arithmetic -------------------------------------------------------------

inline CVec operator+(CVec a, const CVec& b) { return a += b; }
inline CVec operator-(CVec a, const CVec& b) { return a -= b; }
inline CVec operator-(CVec a) { return a *= -1.0; }
inline CVec operator*(Complex s, CVec a) { return a *= s; }
inline CVec operator*(CVec a, Complex s) { return a *= s; }
inline CVec operator*(double s, CVec a) { return a *= s; }

inline CMat operator+(CMat a, const CMat& b) { return a += b; }
inline CMat operator-(CMat a, const CMat& b) { return a -= b; }
inline CMat operator-(CMat a) { return a *= -1.0; }
inline CMat operator*(Complex s, CMat a) { return a *= s; }
inline CMat operator*(CMat a, Complex s) { return a *= s; }
inline CMat operator*(double s, CMat a) { return a *= s; }

inline CMat operator*(const CMat& a, const CMat& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("matmul dimension mismatch");
  const std::size_t m = a.dim();
  CMat c(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < m; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline CVec operator*(const CMat& a, const CVec& x) {
  if (a.dim() != x.dim()) throw DimensionMismatch("matvec dimension mismatch");
  const std::size_t m = a.dim();
  CVec y(m);
  for (std::size_t i = 0; i < m; ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

// -- norms ------------------------------------------------------------------

/// |X| = sum_ij |x_ij|.
inline double abs_norm(const CMat& a) {
  double s = 0.0;
  for (const auto& z : a.data()) s += std::abs(z);
  return s;
}
inline double abs_norm(const CVec& v) {
  double s = 0.0;
  for (const auto& z : v.data()) s += std::abs(z);
  return s;
}
inline double abs_norm(Complex z) { return std::abs(z); }
inline double abs_norm(double x) { return std::abs(x); }

/// Norm induced by the entrywise-sum vector norm: max column abs-sum.
inline double induced_norm(const CMat& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.dim(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

/// Entrywise magnitudes |x_ij| as a (real) matrix.
inline CMat abs_entries(const CMat& a) {
  CMat out(a.dim());
  for (std::size_t i = 0; i < a.data().size(); ++i) out.data()[i] = std::abs(a.data()[i]);
  return out;
}

// -- LU ---------------------------------------------------------------------

/// Partial-pivoted LU of a square complex matrix, P A = L U packed in-place.
class LU {
 public:
  /// Singular pivots are those below kRelativePivotFloor * |A|.
  static constexpr double kRelativePivotFloor = 1e-13;

  explicit LU(CMat a) : lu_(std::move(a)), perm_(lu_.dim()) {
    const std::size_t m = lu_.dim();
    if (m == 0) throw DimensionMismatch("LU of an empty matrix");
    const double floor = kRelativePivotFloor * abs_norm(lu_);
    for (std::size_t i = 0; i < m; ++i) perm_[i] = i;
    for (std::size_t k = 0; k < m; ++k) {
      std::size_t p = k;
      double best = std::abs(lu_(k, k));
      for (std::size_t i = k + 1; i < m; ++i) {
        const double v = std::abs(lu_(i, k));
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (!(best > floor)) {
        singular_ = true;
        continue;
      }
      if (p != k) {
        for (std::size_t j = 0; j < m; ++j) std::swap(lu_(k, j), lu_(p, j));
        std::swap(perm_[k], perm_[p]);
        sign_ = -sign_;
      }
      const Complex pivot = lu_(k, k);
      for (std::size_t i = k + 1; i < m; ++i) {
        const Complex l = lu_(i, k) / pivot;
        lu_(i, k) = l;
        if (l == Complex{}) continue;
        for (std::size_t j = k + 1; j < m; ++j) lu_(i, j) -= l * lu_(k, j);
      }
    }
  }

  std::size_t dim() const { return lu_.dim(); }
  bool singular() const { return singular_; }

  Complex determinant() const {
    if (singular_) return 0.0;
    Complex d = sign_;
    for (std::size_t i = 0; i < dim(); ++i) d *= lu_(i, i);
    return d;
  }

  CVec solve(const CVec& rhs) const {
    if (rhs.dim() != dim()) throw DimensionMismatch("lu_solve rhs dimension mismatch");
    if (singular_) throw Singular("matrix is singular to working precision");
    const std::size_t m = dim();
    CVec x(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = rhs[perm_[i]];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t ii = m; ii-- > 0;) {
      for (std::size_t j = ii + 1; j < m; ++j) x[ii] -= lu_(ii, j) * x[j];
      x[ii] /= lu_(ii, ii);
    }
    return x;
  }

  CMat solve(const CMat& rhs) const {
    if (rhs.dim() != dim()) throw DimensionMismatch("lu_solve rhs dimension mismatch");
    CMat x(dim());
    for (std::size_t j = 0; j < dim(); ++j) x.set_column(j, solve(rhs.column(j)));
    return x;
  }

 private:
  CMat lu_;
  std::vector<std::size_t> perm_;
  double sign_ = 1.0;
  bool singular_ = false;
};

inline CVec lu_solve(const CMat& a, const CVec& rhs) { return LU(a).solve(rhs); }
inline CMat lu_solve(const CMat& a, const CMat& rhs) { return LU(a).solve(rhs); }
inline Complex det(const CMat& a) { return LU(a).determinant(); }
inline CMat inverse(const CMat& a) { return LU(a).solve(CMat::identity(a.dim())); }

}  // namespace bvpgreen
