#pragma once

#include "emreg/calculus.hpp"
#include "emreg/error.hpp"
#include "emreg/jet.hpp"
#include "emreg/real.hpp"
#include "emreg/special.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace emreg {

/// A sigma-regulated summand f_sigma(k) as consumed by the engine.
///
/// `jet(k, sigma, order, from)` returns the Taylor expansion in k about k
/// up to `order`; coefficients below `from` may be left unset, which lets
/// families skip expensive non-local pieces when only high derivatives are
/// needed. `tail(n, sigma)` is the integral of f over [n, inf).
template <class Real>
struct SummandFamily {
  std::string name;
  std::function<Real(Real k, Real sigma)> value;
  std::function<Jet<Real>(Real k, Real sigma, int order, int from)> jet;
  std::function<Real(Real n, Real sigma)> tail;
  // Optional closed-form expansion: coefficient of sigma^k in Gamma-hat^{n,n0}_m.
  std::function<Real(int n, int n0, int m, int k)> series;
  int n_min = 0;
  int max_derivative_order = kMaxJetOrder;
  bool analytic_tail = false;

  Real operator()(Real k, Real sigma) const { return value(k, sigma); }

  /// d^order f / dk^order at k.
  Real derivative(Real k, Real sigma, int order) const {
    if (order == 0) return value(k, sigma);
    if (order > max_derivative_order) throw UnsupportedOrder("summand derivative order too high");
    if (jet) return jet(k, sigma, order, order).derivative(order);
    auto f = [&](Real x) { return value(x, sigma); };
    return finite_difference<Real>(f, k, order);
  }

  /// The family at fixed sigma as a plain real function of k.
  RealFunction<Real> at(Real sigma) const {
    auto self = *this;
    return RealFunction<Real>([self, sigma](Real x) { return self.value(x, sigma); },
                              [self, sigma](Real x, int p) { return self.derivative(x, sigma, p); },
                              max_derivative_order);
  }
};

struct Tolerances {
  double quadrature_rel = 1e-30;
  double epsilon_rel = 1e-8;
};

template <class Real>
struct EMConfig {
  int n = 0;
  int n0 = -1;  // negative: choose automatically; n0 == n: no shifted prefix
  int m = 3;
  std::vector<Real> sigma_grid;
  Tolerances tolerances;

  void validate() const {
    if (n < 0) throw DomainError("n must be non-negative");
    if (n0 >= 0 && n0 < n) throw DomainError("n0 must be >= n");
    if (m < 1) throw DomainError("m must be >= 1");
    for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
      if (!(sigma_grid[i] > Real(0))) throw DomainError("sigma grid must be positive");
      if (i > 0 && !(sigma_grid[i] > sigma_grid[i - 1]))
        throw DomainError("sigma grid must be strictly increasing");
    }
  }
};

/// count log-spaced points on [lo, hi].
template <class Real>
std::vector<Real> log_grid(Real lo, Real hi, int count) {
  using std::exp;
  using std::log;
  if (!(lo > Real(0)) || !(hi > lo) || count < 2) throw DomainError("invalid sigma grid");
  std::vector<Real> g(static_cast<std::size_t>(count));
  const Real a = log(lo);
  const Real b = log(hi);
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = exp(a + (b - a) * Real(i) / Real(count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

/// S_m(k)[f] = sum_{r=1}^{m} B_2r/(2r)! f^(2r-1)(k).
template <class Real>
Real s_correction(const SummandFamily<Real>& f, int k, int m, Real sigma) {
  using std::isfinite;
  if (m < 1) throw DomainError("m must be >= 1");
  const int order = 2 * m - 1;
  Jet<Real> j;
  try {
    if (f.jet) {
      j = f.jet(Real(k), sigma, order, 1);
    } else {
      j = Jet<Real>(order);
      for (int p = 1; p <= order; ++p) {
        Real fact(1);
        for (int i = 2; i <= p; ++i) fact *= Real(i);
        j[p] = f.derivative(Real(k), sigma, p) / fact;
      }
    }
  } catch (const DomainError& e) {
    throw SingularStart("boundary corrections diverge at k = " + std::to_string(k) + ": " + e.what(),
                        k + 1);
  }
  Real s(0);
  for (int r = 1; r <= m; ++r) {
    // f^(2r-1)/(2r)! = c_{2r-1} (2r-1)!/(2r)! = c_{2r-1}/(2r)
    s += bernoulli_number(2 * r).template as<Real>() * j[2 * r - 1] / Real(2 * r);
  }
  if (!isfinite(s)) throw SingularStart("boundary corrections are not finite", k + 1);
  return s;
}

template <class Real>
Real default_quadrature_tol() {
  const Real floor = epsilon<Real>() * Real(100);
  return Real(1e-30) > floor ? Real(1e-30) : floor;
}

/// |LHS - RHS| of the Euler-Maclaurin identity on [n, N] with the remainder
/// integral evaluated by quadrature.
///
/// sum_{k=n}^{N} f(k) = int_n^N f + (f(n) + f(N))/2 + S_m(N) - S_m(n) + T_m(n, N),
/// T_m = int_n^N P_{2m+1}(x) f^(2m+1)(x) dx / (2m+1)!.
template <class Real>
Real em_identity_residual(const RealFunction<Real>& f, int n, int N, int m) {
  using std::abs;
  if (N < n) throw DomainError("N must be >= n");
  Real lhs(0);
  for (int k = n; k <= N; ++k) lhs += f(Real(k));
  const Real tol = default_quadrature_tol<Real>();
  Real rhs = integrate_finite<Real>([&](Real x) { return f(x); }, Real(n), Real(N), tol, tol).value;
  rhs += (f(Real(n)) + f(Real(N))) / Real(2);
  auto s_at = [&](Real x) {
    Real s(0);
    for (int r = 1; r <= m; ++r) {
      Real fact(1);
      for (int i = 2; i <= 2 * r; ++i) fact *= Real(i);
      s += bernoulli_number(2 * r).template as<Real>() / fact * derivative(f, x, 2 * r - 1);
    }
    return s;
  };
  rhs += s_at(Real(N)) - s_at(Real(n));
  Real fact(1);
  for (int i = 2; i <= 2 * m + 1; ++i) fact *= Real(i);
  // The periodic kernel has kinks at integers, so integrate unit cell by unit cell.
  Real t(0);
  for (int k = n; k < N; ++k) {
    t += integrate_finite<Real>(
             [&](Real x) { return periodic_bernoulli<Real>(2 * m + 1, x) * derivative(f, x, 2 * m + 1); },
             Real(k), Real(k + 1), tol, tol)
             .value;
  }
  rhs += t / fact;
  return abs(lhs - rhs);
}

template <class Real>
Real tail_integral(const SummandFamily<Real>& f, int n, Real sigma, Real rel_tol) {
  if (f.tail) return f.tail(Real(n), sigma);
  auto g = [&](Real x) { return f.value(x, sigma); };
  return integrate_to_infinity<Real>(g, Real(n), rel_tol, Real(1)).value;
}

/// Gamma^n_m[f_sigma] = f(n)/2 - S_m(n) + int_n^inf f.
template <class Real>
Real gamma(const SummandFamily<Real>& f, int n, int m, Real sigma,
           Real rel_tol = default_quadrature_tol<Real>()) {
  if (n < f.n_min) throw DomainError("start index below the family domain");
  const Real s = s_correction(f, n, m, sigma);
  return f.value(Real(n), sigma) / Real(2) - s + tail_integral(f, n, sigma, rel_tol);
}

/// Sum_{k=n}^{n0-1} f(k) + Gamma^{n0}_m.
template <class Real>
Real gamma_shifted(const SummandFamily<Real>& f, int n, int n0, int m, Real sigma,
                   Real rel_tol = default_quadrature_tol<Real>()) {
  if (n0 < n) throw DomainError("n0 must be >= n");
  Real prefix(0);
  for (int k = n; k < n0; ++k) prefix += f.value(Real(k), sigma);
  return prefix + gamma(f, n0, m, sigma, rel_tol);
}

/// 2 zeta(2m+1)/(2 pi)^(2m+1) * int_n^inf |f^(2m+1)|, upper-biased.
template <class Real>
Real tail_bound_epsilon(const SummandFamily<Real>& f, int n, int m, Real sigma,
                        Real rel_tol = Real(1e-10)) {
  using std::abs;
  using std::pow;
  const int order = 2 * m + 1;
  auto g = [&](Real x) {
    if (f.jet) return abs(f.jet(x, sigma, order, order).derivative(order));
    return abs(f.derivative(x, sigma, order));
  };
  QuadratureResult<Real> q;
  try {
    q = integrate_to_infinity<Real>(g, Real(n), rel_tol, Real(1));
  } catch (const DivergenceError& e) {
    throw DivergenceError(std::string("Hardy condition violated: ") + e.what());
  }
  const Real pre = Real(2) * riemann_zeta<Real>(order) / pow(Real(2) * pi<Real>(), order);
  return pre * (q.value + q.error_estimate);
}

/// Smallest n0 >= n whose boundary corrections stay bounded along the grid.
///
/// A start index is rejected when S_m is not analytic there or when its
/// magnitude grows by more than 1e6 between successive grid points.
template <class Real>
int select_n0(const SummandFamily<Real>& f, int n, int m, const std::vector<Real>& grid,
              int max_shift = 8) {
  using std::abs;
  for (int n0 = n; n0 <= n + max_shift; ++n0) {
    bool ok = true;
    try {
      Real prev(0);
      bool first = true;
      // Largest sigma first, walking towards zero.
      for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
        const Real s = abs(s_correction(f, n0, m, *it));
        if (!first && prev > Real(0) && s > Real(1e6) * prev) {
          ok = false;
          break;
        }
        prev = s;
        first = false;
      }
    } catch (const SingularStart&) {
      ok = false;
    }
    if (ok) return n0;
  }
  throw SingularStart("no finite start index found", n + max_shift + 1);
}

}  // namespace emreg
