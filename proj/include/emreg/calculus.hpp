#pragma once

#include "emreg/error.hpp"
#include "emreg/real.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

namespace emreg {

template <class Real>
struct QuadratureResult {
  Real value = Real(0);
  Real error_estimate = Real(0);
  long evaluations = 0;
  // Upper end actually reached for a semi-infinite integral.
  Real truncation_point = Real(0);
};

/// Real map with an optional stack of analytic derivatives.
template <class Real>
struct RealFunction {
  std::function<Real(Real)> value;
  // derivative(x, k) for 1 <= k <= analytic_order
  std::function<Real(Real, int)> derivative;
  int analytic_order = 0;

  RealFunction() = default;
  RealFunction(std::function<Real(Real)> f) : value(std::move(f)) {}  // NOLINT
  RealFunction(std::function<Real(Real)> f, std::function<Real(Real, int)> d, int order)
      : value(std::move(f)), derivative(std::move(d)), analytic_order(order) {}

  Real operator()(Real x) const { return value(x); }
};

struct QuadratureOptions {
  long max_evaluations = 2'000'000;
  int max_panels = 200;
};

namespace detail {

template <class Real>
struct Panel {
  Real a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// One 21-point Kronrod panel with its embedded 10-point Gauss estimate.
template <class Real, class F>
Panel<Real> gk21(const F& f, Real a, Real b) {
  using std::abs;
  const auto& x = boost::math::quadrature::gauss_kronrod<Real, 21>::abscissa();
  const auto& wk = boost::math::quadrature::gauss_kronrod<Real, 21>::weights();
  const auto& wg = boost::math::quadrature::gauss<Real, 10>::weights();
  const Real c = (a + b) / Real(2);
  const Real h = (b - a) / Real(2);
  const Real fc = f(c);
  Real k = wk[0] * fc;
  Real g(0);
  for (std::size_t i = 1; i < x.size(); ++i) {
    const Real dx = h * x[i];
    const Real s = f(c - dx) + f(c + dx);
    k += wk[i] * s;
    if (i % 2 == 1) g += wg[i / 2] * s;
  }
  return {a, b, k * h, abs((k - g) * h)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod on a finite interval, refining the panel with the
/// largest error first.
template <class Real, class F>
QuadratureResult<Real> integrate_finite(const F& f, Real a, Real b, Real rel_tol,
                                        Real abs_tol = Real(0),
                                        const QuadratureOptions& opt = {}) {
  using std::abs;
  QuadratureResult<Real> r;
  r.truncation_point = b;
  if (a == b) {
    r.evaluations = 1;
    return r;
  }
  std::priority_queue<detail::Panel<Real>> heap;
  auto p = detail::gk21<Real>(f, a, b);
  long evals = 21;
  Real total = p.value;
  Real err = p.error;
  heap.push(p);
  while (err > std::max(rel_tol * abs(total), abs_tol)) {
    if (evals + 42 > opt.max_evaluations) {
      throw AccuracyError("quadrature budget exhausted", to_double(total), to_double(err));
    }
    auto worst = heap.top();
    heap.pop();
    const Real mid = (worst.a + worst.b) / Real(2);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval cannot be split further in this precision.
      heap.push({worst.a, worst.b, worst.value, Real(0)});
      err -= worst.error;
      continue;
    }
    auto left = detail::gk21<Real>(f, worst.a, mid);
    auto right = detail::gk21<Real>(f, mid, worst.b);
    evals += 42;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (heap.size() % 64 == 0) {
      // Re-sum to keep the running totals free of drift.
      auto copy = heap;
      total = Real(0);
      err = Real(0);
      while (!copy.empty()) {
        total += copy.top().value;
        err += copy.top().error;
        copy.pop();
      }
    }
  }
  r.value = total;
  r.error_estimate = err;
  r.evaluations = evals;
  return r;
}

/// Integral over [a, inf). Panels of doubling width are added until the
/// contributions decay; the remainder is estimated as a geometric tail.
///
/// `scale` is the width of the first panel. Throws DivergenceError when the
/// panel contributions stop shrinking.
template <class Real, class F>
QuadratureResult<Real> integrate_to_infinity(const F& f, Real a, Real rel_tol, Real scale = Real(1),
                                             Real abs_tol = Real(0),
                                             const QuadratureOptions& opt = {}) {
  using std::abs;
  QuadratureResult<Real> r;
  Real lo = a;
  Real width = scale;
  Real total(0);
  Real err(0);
  Real prev(0);
  int shrinking = 0;
  int growing = 0;
  for (int panel = 0; panel < opt.max_panels; ++panel) {
    const Real hi = lo + width;
    // Panel tolerance relative to the running total keeps late, tiny panels cheap.
    const Real floor = std::max(abs_tol, rel_tol * abs(total)) / Real(8);
    auto q = integrate_finite<Real>(f, lo, hi, rel_tol / Real(4), floor, opt);
    total += q.value;
    err += q.error_estimate;
    r.evaluations += q.evaluations;
    lo = hi;
    const Real mag = abs(q.value);
    if (mag == Real(0) && prev == Real(0) && panel >= 3) {
      r.value = total;
      r.error_estimate = err;
      r.truncation_point = hi;
      return r;
    }
    if (panel > 0) {
      if (mag < abs(prev)) {
        ++shrinking;
        growing = 0;
      } else {
        shrinking = 0;
        ++growing;
      }
      const Real ratio = abs(prev) > Real(0) ? mag / abs(prev) : Real(0);
      // Geometric estimate of what lies beyond hi.
      const Real tail = ratio < Real(1) ? mag * ratio / (Real(1) - ratio) : mag;
      const Real target = std::max(rel_tol * abs(total), abs_tol);
      if (shrinking >= 2 && ratio < Real(0.5) && tail < target / Real(4)) {
        r.value = total;
        r.error_estimate = err + tail;
        r.truncation_point = hi;
        return r;
      }
      if (growing > 40) throw DivergenceError("integrand does not decay on [a, inf)");
    }
    prev = q.value;
    width *= Real(2);
  }
  throw DivergenceError("semi-infinite integral did not converge within the panel budget");
}

namespace detail {

template <class Real>
struct VecPanel {
  Real a, b;
  std::vector<Real> value, error;
  Real key;
  bool operator<(const VecPanel& o) const { return key < o.key; }
};

template <class Real, class F>
VecPanel<Real> gk21_vec(const F& f, Real a, Real b, const std::vector<Real>& weight) {
  using std::abs;
  const auto& x = boost::math::quadrature::gauss_kronrod<Real, 21>::abscissa();
  const auto& wk = boost::math::quadrature::gauss_kronrod<Real, 21>::weights();
  const auto& wg = boost::math::quadrature::gauss<Real, 10>::weights();
  const Real c = (a + b) / Real(2);
  const Real h = (b - a) / Real(2);
  std::vector<Real> k = f(c);
  const std::size_t n = k.size();
  std::vector<Real> g(n, Real(0));
  for (auto& v : k) v *= wk[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const Real dx = h * x[i];
    const auto lo = f(c - dx);
    const auto hi = f(c + dx);
    for (std::size_t j = 0; j < n; ++j) {
      const Real s = lo[j] + hi[j];
      k[j] += wk[i] * s;
      if (i % 2 == 1) g[j] += wg[i / 2] * s;
    }
  }
  VecPanel<Real> p{a, b, std::vector<Real>(n), std::vector<Real>(n), Real(0)};
  for (std::size_t j = 0; j < n; ++j) {
    p.value[j] = k[j] * h;
    p.error[j] = abs((k[j] - g[j]) * h);
    if (weight.size() == n && weight[j] > Real(0)) p.key = std::max(p.key, p.error[j] / weight[j]);
  }
  return p;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod for a vector-valued integrand of fixed length.
///
/// Every component must meet max(rel_tol |I_j|, abs_tol); panels are refined
/// in order of their largest error relative to the first whole-interval
/// estimate of each component.
template <class Real, class F>
std::vector<Real> integrate_finite_vec(const F& f, Real a, Real b, Real rel_tol, Real abs_tol = Real(0),
                                       const QuadratureOptions& opt = {}) {
  using std::abs;
  auto first = detail::gk21_vec<Real>(f, a, b, {});
  const std::size_t n = first.value.size();
  std::vector<Real> weight(n);
  for (std::size_t j = 0; j < n; ++j) weight[j] = std::max(abs(first.value[j]), abs_tol) + first.error[j];
  for (std::size_t j = 0; j < n; ++j)
    if (weight[j] > Real(0)) first.key = std::max(first.key, first.error[j] / weight[j]);
  std::priority_queue<detail::VecPanel<Real>> heap;
  std::vector<Real> total = first.value;
  std::vector<Real> err = first.error;
  heap.push(first);
  long evals = 21;
  auto done = [&] {
    for (std::size_t j = 0; j < n; ++j)
      if (err[j] > std::max(rel_tol * abs(total[j]), abs_tol)) return false;
    return true;
  };
  while (!done()) {
    if (evals + 42 > opt.max_evaluations)
      throw AccuracyError("vector quadrature budget exhausted", to_double(total[0]), to_double(err[0]));
    auto worst = heap.top();
    heap.pop();
    const Real mid = (worst.a + worst.b) / Real(2);
    if (!(mid > worst.a && mid < worst.b)) {
      for (std::size_t j = 0; j < n; ++j) err[j] -= worst.error[j];
      std::fill(worst.error.begin(), worst.error.end(), Real(0));
      worst.key = Real(0);
      heap.push(worst);
      continue;
    }
    auto left = detail::gk21_vec<Real>(f, worst.a, mid, weight);
    auto right = detail::gk21_vec<Real>(f, mid, worst.b, weight);
    evals += 42;
    for (std::size_t j = 0; j < n; ++j) {
      total[j] += left.value[j] + right.value[j] - worst.value[j];
      err[j] += left.error[j] + right.error[j] - worst.error[j];
    }
    heap.push(std::move(left));
    heap.push(std::move(right));
  }
  return total;
}

/// Vector analogue of integrate_to_infinity; stops once every component's
/// panels shrink geometrically below its target.
template <class Real, class F>
std::vector<Real> integrate_to_infinity_vec(const F& f, Real a, Real rel_tol, Real scale = Real(1),
                                            Real abs_tol = Real(0), const QuadratureOptions& opt = {}) {
  using std::abs;
  Real lo = a;
  Real width = scale;
  std::vector<Real> total;
  std::vector<Real> prev;
  int shrinking = 0;
  for (int panel = 0; panel < opt.max_panels; ++panel) {
    const Real hi = lo + width;
    Real floor = abs_tol;
    for (const auto& t : total) floor = std::max(floor, rel_tol * abs(t) / Real(8));
    auto q = integrate_finite_vec<Real>(f, lo, hi, rel_tol / Real(4), floor, opt);
    if (total.empty()) total.assign(q.size(), Real(0));
    for (std::size_t j = 0; j < q.size(); ++j) total[j] += q[j];
    lo = hi;
    if (!prev.empty()) {
      bool ok = true;
      bool shrink = true;
      for (std::size_t j = 0; j < q.size(); ++j) {
        const Real mag = abs(q[j]);
        const Real pm = abs(prev[j]);
        if (mag > pm && mag > Real(0)) shrink = false;
        const Real ratio = pm > Real(0) ? mag / pm : (mag == Real(0) ? Real(0) : Real(1));
        const Real tail = ratio < Real(1) ? mag * ratio / (Real(1) - ratio) : mag;
        if (!(ratio < Real(0.5)) || tail > std::max(rel_tol * abs(total[j]), abs_tol) / Real(4)) ok = false;
      }
      shrinking = shrink ? shrinking + 1 : 0;
      if (shrinking >= 2 && ok) return total;
    }
    prev = q;
    width *= Real(2);
  }
  throw DivergenceError("semi-infinite vector integral did not converge within the panel budget");
}

/// integrate(f, a, b, rel_tol) with b = +inf allowed.
template <class Real>
QuadratureResult<Real> integrate(const RealFunction<Real>& f, Real a, Real b, Real rel_tol,
                                 Real scale = Real(1)) {
  using std::isinf;
  if (!(rel_tol > Real(10) * epsilon<Real>()) || !(rel_tol < Real(1e-2)))
    throw DomainError("rel_tol must lie in (10 eps, 1e-2)");
  auto fn = [&f](Real x) { return f(x); };
  if (b == std::numeric_limits<Real>::infinity())
    return integrate_to_infinity<Real>(fn, a, rel_tol, scale);
  return integrate_finite<Real>(fn, a, b, rel_tol);
}

inline constexpr int kMaxDerivativeOrder = 17;

/// Central finite difference of order p with step h.
template <class Real, class F>
Real central_difference(const F& f, Real x, int p, Real h) {
  // sum_i (-1)^i C(p, i) f(x + (p/2 - i) h) / h^p
  Real s(0);
  Real binom(1);
  for (int i = 0; i <= p; ++i) {
    const Real off = (Real(p) / Real(2) - Real(i)) * h;
    const Real term = binom * f(x + off);
    s += (i % 2 == 0) ? term : -term;
    binom = binom * Real(p - i) / Real(i + 1);
  }
  using std::pow;
  return s / pow(h, p);
}

/// Ridders-style Richardson extrapolation of central differences.
template <class Real, class F>
Real finite_difference(const F& f, Real x, int order, Real* error = nullptr) {
  using std::abs;
  using std::max;
  using std::pow;
  if (order < 0 || order > kMaxDerivativeOrder)
    throw UnsupportedOrder("finite-difference derivative order above capability");
  if (order == 0) return f(x);
  constexpr int kLevels = 10;
  const Real shrink(2);
  const Real scale = max(Real(1), abs(x));
  // A moderate start keeps the stencil local; the tableau does the rest.
  Real h = scale * Real(0.2);
  std::vector<std::vector<Real>> t(kLevels, std::vector<Real>(kLevels));
  Real best = Real(0);
  Real best_err = std::numeric_limits<Real>::max();
  for (int i = 0; i < kLevels; ++i) {
    t[i][0] = central_difference<Real>(f, x, order, h);
    Real fac = shrink * shrink;
    for (int j = 1; j <= i; ++j) {
      t[i][j] = (fac * t[i][j - 1] - t[i - 1][j - 1]) / (fac - Real(1));
      fac *= shrink * shrink;
      const Real e = max(abs(t[i][j] - t[i][j - 1]), abs(t[i][j] - t[i - 1][j - 1]));
      if (e <= best_err) {
        best_err = e;
        best = t[i][j];
      }
    }
    if (i > 0 && abs(t[i][i] - t[i - 1][i - 1]) >= Real(2) * best_err) break;
    h /= shrink;
  }
  if (error) *error = best_err;
  return best;
}

/// k-th derivative of f at x, analytic when the function provides it.
template <class Real>
Real derivative(const RealFunction<Real>& f, Real x, int order) {
  if (order < 0) throw DomainError("derivative order must be non-negative");
  if (order == 0) return f(x);
  if (order <= f.analytic_order && f.derivative) return f.derivative(x, order);
  if (order > kMaxDerivativeOrder) throw UnsupportedOrder("derivative order above capability");
  return finite_difference<Real>(f.value, x, order);
}

/// Certified upper estimate of the integral of |f^(order)| over [n, inf).
template <class Real>
Real abs_derivative_integral(const RealFunction<Real>& f, Real n, int order, Real rel_tol,
                             Real scale = Real(1)) {
  using std::abs;
  auto g = [&](Real x) { return abs(derivative(f, x, order)); };
  auto q = integrate_to_infinity<Real>(g, n, rel_tol, scale, Real(0));
  return q.value + q.error_estimate;
}

}  // namespace emreg
