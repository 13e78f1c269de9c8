#pragma once

// Truncated Laurent series in one variable t.
//
// A series stores the coefficients of t^base, t^(base+1), ... and an explicit
// truncation order: the value is only known modulo t^(order+1). Every
// operation propagates the order pessimistically, so a result never claims
// more accuracy than its operands support.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "snewton/errors.hpp"

namespace snewton {

template <typename Scalar>
class TruncatedSeries {
 public:
  using scalar_type = Scalar;
  using real_type = typename Eigen::NumTraits<Scalar>::Real;

  /// Leading coefficients below this fraction of max(max |c_k|, 1) are
  /// treated as zero and absorbed into the base exponent.
  static constexpr real_type kStripThreshold = real_type(1e-14);

  /// The zero series known to order 0.
  TruncatedSeries() = default;

  TruncatedSeries(int base, std::vector<Scalar> coeffs, int order)
      : base_(base), coeffs_(std::move(coeffs)), order_(order) {
    normalize();
  }

  static TruncatedSeries zero(int order) { return TruncatedSeries(0, {}, order); }

  static TruncatedSeries constant(Scalar c, int order) { return TruncatedSeries(0, {c}, order); }

  /// c * t^exponent
  static TruncatedSeries monomial(Scalar c, int exponent, int order) {
    return TruncatedSeries(exponent, {c}, order);
  }

  int base() const { return base_; }
  int order() const { return order_; }
  std::span<const Scalar> coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  /// Lowest exponent that may carry a nonzero coefficient. For the zero
  /// series this is order + 1.
  int valuation() const { return is_zero() ? order_ + 1 : base_; }

  /// Highest stored exponent, or base - 1 when empty.
  int degree() const { return base_ + static_cast<int>(coeffs_.size()) - 1; }

  /// Coefficient of t^exponent; zero outside the stored range.
  Scalar coeff(int exponent) const {
    const int k = exponent - base_;
    if (k < 0 || k >= static_cast<int>(coeffs_.size())) return Scalar(0);
    return coeffs_[static_cast<std::size_t>(k)];
  }

  real_type max_abs() const {
    real_type m(0);
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  /// Drops every term above t^order and lowers the order accordingly.
  TruncatedSeries truncated(int order) const {
    return TruncatedSeries(base_, coeffs_, std::min(order, order_));
  }

  /// Same coefficients, order replaced. Raising the order asserts that the
  /// stored terms are exact, which is how polynomial data enters series
  /// arithmetic.
  TruncatedSeries with_order(int order) const { return TruncatedSeries(base_, coeffs_, order); }

  TruncatedSeries operator-() const {
    std::vector<Scalar> c(coeffs_.size());
    std::transform(coeffs_.begin(), coeffs_.end(), c.begin(), [](const Scalar& v) { return -v; });
    return TruncatedSeries(base_, std::move(c), order_);
  }

  TruncatedSeries& operator*=(const Scalar& s) {
    for (auto& c : coeffs_) c *= s;
    normalize();
    return *this;
  }

  friend TruncatedSeries operator*(const Scalar& s, TruncatedSeries u) { return u *= s; }
  friend TruncatedSeries operator*(TruncatedSeries u, const Scalar& s) { return u *= s; }

  friend TruncatedSeries operator+(const TruncatedSeries& s, const TruncatedSeries& u) {
    const int order = std::min(s.order_, u.order_);
    if (s.is_zero()) return u.truncated(order);
    if (u.is_zero()) return s.truncated(order);
    const int lo = std::min(s.base_, u.base_);
    const int hi = std::min(order, std::max(s.degree(), u.degree()));
    if (hi < lo) return zero(order);
    std::vector<Scalar> c(static_cast<std::size_t>(hi - lo + 1), Scalar(0));
    for (int e = lo; e <= hi; ++e) c[static_cast<std::size_t>(e - lo)] = s.coeff(e) + u.coeff(e);
    return TruncatedSeries(lo, std::move(c), order);
  }

  friend TruncatedSeries operator-(const TruncatedSeries& s, const TruncatedSeries& u) { return s + (-u); }

  /// Cauchy product. The result is accurate to
  /// min(s.order + val(u), u.order + val(s)).
  friend TruncatedSeries operator*(const TruncatedSeries& s, const TruncatedSeries& u) {
    const int order = std::min(s.order_ + u.valuation(), u.order_ + s.valuation());
    if (s.is_zero() || u.is_zero()) return zero(order);
    const int lo = s.base_ + u.base_;
    const int hi = std::min(order, s.degree() + u.degree());
    if (hi < lo) return zero(order);
    std::vector<Scalar> c(static_cast<std::size_t>(hi - lo + 1), Scalar(0));
    const int ns = static_cast<int>(s.coeffs_.size());
    const int nu = static_cast<int>(u.coeffs_.size());
    auto term = [](const std::vector<Scalar>& a, int i, const std::vector<Scalar>& b, int j) {
      if (i >= static_cast<int>(a.size()) || j >= static_cast<int>(b.size())) return Scalar(0);
      return a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    };
    // pair s_i u_j with s_j u_i so that s * u and u * s agree bit for bit
    for (int k = 0; k <= hi - lo; ++k) {
      Scalar acc(0);
      for (int i = std::max(0, k - std::max(ns, nu) + 1); 2 * i <= k; ++i) {
        const int j = k - i;
        const Scalar a = term(s.coeffs_, i, u.coeffs_, j);
        acc += i == j ? a : a + term(s.coeffs_, j, u.coeffs_, i);
      }
      c[static_cast<std::size_t>(k)] = acc;
    }
    return TruncatedSeries(lo, std::move(c), order);
  }

  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

 private:
  void normalize() {
    // keep base + len - 1 <= order
    const int keep = order_ - base_ + 1;
    if (keep <= 0) {
      coeffs_.clear();
    } else if (static_cast<int>(coeffs_.size()) > keep) {
      coeffs_.resize(static_cast<std::size_t>(keep));
    }
    const real_type cut = kStripThreshold * std::max(max_abs(), real_type(1));
    std::size_t lead = 0;
    while (lead < coeffs_.size() && std::abs(coeffs_[lead]) < cut) ++lead;
    if (lead == coeffs_.size()) {
      coeffs_.clear();
      base_ = 0;
      return;
    }
    if (lead > 0) {
      coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
      base_ += static_cast<int>(lead);
    }
  }

  int base_ = 0;
  std::vector<Scalar> coeffs_;
  int order_ = 0;
};

using Series = TruncatedSeries<std::complex<double>>;

/// Inverse of s, accurate so that s * invert(s, order) = 1 + O(t^(order+1))
/// whenever s itself is known far enough.
template <typename Scalar>
TruncatedSeries<Scalar> invert(const TruncatedSeries<Scalar>& s, int order) {
  if (s.is_zero()) throw ZeroSeries();
  const int rel = std::min(order, s.order() - s.base());
  if (rel < 0) return TruncatedSeries<Scalar>::zero(rel - s.base());
  const auto sc = s.coeffs();
  const Scalar inv0 = Scalar(1) / sc[0];
  std::vector<Scalar> u(static_cast<std::size_t>(rel + 1), Scalar(0));
  u[0] = inv0;
  for (int k = 1; k <= rel; ++k) {
    Scalar acc(0);
    const int jmax = std::min(k, static_cast<int>(sc.size()) - 1);
    for (int j = 1; j <= jmax; ++j) acc += sc[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(k - j)];
    u[static_cast<std::size_t>(k)] = -acc * inv0;
  }
  return TruncatedSeries<Scalar>(-s.base(), std::move(u), rel - s.base());
}

template <typename Scalar>
TruncatedSeries<Scalar> differentiate(const TruncatedSeries<Scalar>& s) {
  if (s.is_zero()) return TruncatedSeries<Scalar>::zero(s.order() - 1);
  const auto sc = s.coeffs();
  std::vector<Scalar> c(sc.size());
  for (std::size_t k = 0; k < sc.size(); ++k) {
    c[k] = sc[k] * static_cast<typename TruncatedSeries<Scalar>::real_type>(s.base() + static_cast<int>(k));
  }
  return TruncatedSeries<Scalar>(s.base() - 1, std::move(c), s.order() - 1);
}

namespace detail {
template <typename Scalar>
Scalar ipow(Scalar x, int e) {
  if (e < 0) return Scalar(1) / ipow(x, -e);
  Scalar r(1);
  while (e > 0) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}
}  // namespace detail

/// Horner evaluation of the stored terms at t0.
template <typename Scalar>
Scalar eval(const TruncatedSeries<Scalar>& s, const Scalar& t0) {
  if (s.is_zero()) return Scalar(0);
  if (s.base() < 0 && t0 == Scalar(0)) throw PoleAtZero();
  const auto sc = s.coeffs();
  Scalar acc(0);
  for (auto it = sc.rbegin(); it != sc.rend(); ++it) acc = acc * t0 + *it;
  return acc * detail::ipow(t0, s.base());
}

}  // namespace snewton
