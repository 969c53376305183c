#pragma once

#include "emreg/error.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

namespace emreg {

inline constexpr int kMaxJetOrder = 24;

/// Truncated Taylor series c_0 + c_1 t + ... + c_N t^N about a point.
///
/// Coefficients are normalized (c_k = f^(k)/k!). Arithmetic propagates the
/// expansion exactly up to rounding, which is how every family in this
/// library exposes derivatives in its summation index.
template <class Real>
class Jet {
 public:
  Jet() = default;
  explicit Jet(int order, Real constant = Real(0)) : order_(checked(order)) {
    c_.fill(Real(0));
    c_[0] = constant;
  }

  /// The identity map t -> x0 + t.
  static Jet variable(Real x0, int order) {
    Jet j(order, x0);
    if (order >= 1) j.c_[1] = Real(1);
    return j;
  }

  int order() const { return order_; }
  const Real& operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  Real& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
  const Real& value() const { return c_[0]; }

  /// k-th derivative at the expansion point.
  Real derivative(int k) const {
    Real f = c_[static_cast<std::size_t>(k)];
    for (int i = 2; i <= k; ++i) f *= Real(i);
    return f;
  }

  /// Taylor jet of d/dt, one order shorter.
  Jet differentiate() const {
    Jet r(order_ > 0 ? order_ - 1 : 0);
    for (int k = 0; k < order_; ++k) r.c_[k] = c_[k + 1] * Real(k + 1);
    return r;
  }

  /// Antiderivative with the given value at t = 0, one order longer.
  Jet integrate(Real constant) const {
    Jet r(order_ + 1, constant);
    for (int k = 0; k <= order_; ++k) r.c_[k + 1] = c_[k] / Real(k + 1);
    return r;
  }

  Jet truncated(int order) const {
    Jet r(order);
    for (int k = 0; k <= order && k <= order_; ++k) r.c_[k] = c_[k];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    const int n = common(o);
    for (int k = 0; k <= n; ++k) c_[k] += o.c_[k];
    order_ = n;
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    const int n = common(o);
    for (int k = 0; k <= n; ++k) c_[k] -= o.c_[k];
    order_ = n;
    return *this;
  }
  Jet& operator+=(const Real& s) {
    c_[0] += s;
    return *this;
  }
  Jet& operator-=(const Real& s) {
    c_[0] -= s;
    return *this;
  }
  Jet& operator*=(const Real& s) {
    for (int k = 0; k <= order_; ++k) c_[k] *= s;
    return *this;
  }
  Jet& operator/=(const Real& s) {
    for (int k = 0; k <= order_; ++k) c_[k] /= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, const Real& s) { return a += s; }
  friend Jet operator+(const Real& s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, const Real& s) { return a -= s; }
  friend Jet operator-(const Real& s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, const Real& s) { return a *= s; }
  friend Jet operator*(const Real& s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, const Real& s) { return a /= s; }
  friend Jet operator-(Jet a) {
    for (int k = 0; k <= a.order_; ++k) a.c_[k] = -a.c_[k];
    return a;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    const int n = a.common(b);
    Jet r(n);
    for (int k = 0; k <= n; ++k) {
      Real s(0);
      for (int j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
      r.c_[k] = s;
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    if (b.c_[0] == Real(0)) throw DomainError("jet division by a series vanishing at the point");
    const int n = a.common(b);
    Jet q(n);
    for (int k = 0; k <= n; ++k) {
      Real s = a.c_[k];
      for (int j = 1; j <= k; ++j) s -= b.c_[j] * q.c_[k - j];
      q.c_[k] = s / b.c_[0];
    }
    return q;
  }

  friend Jet operator/(const Real& s, const Jet& b) { return Jet(b.order_, s) / b; }

  friend Jet sqrt(const Jet& a) {
    using std::sqrt;
    if (!(a.c_[0] > Real(0))) {
      bool constant = true;
      for (int k = 1; k <= a.order_; ++k) constant = constant && a.c_[k] == Real(0);
      if (a.c_[0] == Real(0) && constant) return Jet(a.order_);
      throw DomainError("square root is not analytic at the expansion point");
    }
    Jet r(a.order_);
    r.c_[0] = sqrt(a.c_[0]);
    const Real twice = Real(2) * r.c_[0];
    for (int k = 1; k <= a.order_; ++k) {
      Real s = a.c_[k];
      for (int j = 1; j < k; ++j) s -= r.c_[j] * r.c_[k - j];
      r.c_[k] = s / twice;
    }
    return r;
  }

  friend Jet exp(const Jet& a) {
    using std::exp;
    Jet r(a.order_);
    r.c_[0] = exp(a.c_[0]);
    for (int k = 1; k <= a.order_; ++k) {
      Real s(0);
      for (int j = 1; j <= k; ++j) s += Real(j) * a.c_[j] * r.c_[k - j];
      r.c_[k] = s / Real(k);
    }
    return r;
  }

  friend Jet log(const Jet& a) {
    using std::log;
    if (!(a.c_[0] > Real(0))) throw DomainError("logarithm of a non-positive series");
    Jet r(a.order_);
    r.c_[0] = log(a.c_[0]);
    for (int k = 1; k <= a.order_; ++k) {
      Real s = a.c_[k];
      for (int j = 1; j < k; ++j) s -= Real(j) * r.c_[j] * a.c_[k - j] / Real(k);
      r.c_[k] = s / a.c_[0];
    }
    return r;
  }

  friend Jet pow(const Jet& a, int p) {
    if (p < 0) return Real(1) / pow(a, -p);
    Jet r(a.order_, Real(1));
    Jet base = a;
    while (p > 0) {
      if (p & 1) r = r * base;
      p >>= 1;
      if (p) base = base * base;
    }
    return r;
  }

  /// Real power; the series must be positive at the point.
  friend Jet pow(const Jet& a, const Real& p) { return exp(p * log(a)); }

 private:
  static int checked(int order) {
    if (order < 0 || order > kMaxJetOrder)
      throw UnsupportedOrder("jet order " + std::to_string(order) + " outside [0, " +
                             std::to_string(kMaxJetOrder) + "]");
    return order;
  }
  int common(const Jet& o) const { return order_ < o.order_ ? order_ : o.order_; }

  int order_ = 0;
  std::array<Real, kMaxJetOrder + 1> c_{};
};

}  // namespace emreg
