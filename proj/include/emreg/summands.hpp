#pragma once

#include "emreg/calculus.hpp"
#include "emreg/em.hpp"
#include "emreg/error.hpp"
#include "emreg/jet.hpp"
#include "emreg/real.hpp"
#include "emreg/spectra.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace emreg {

/// First summation index of a sector: TE cuboid modes need nz >= 1.
inline int cuboid_start(Sector s) { return s == Sector::TE ? 1 : 0; }

// ---------------------------------------------------------------------------
// Homogeneous cuboid

/// (4/(pi s)^2 + 4 nz/(pi s) + 2 nz^2) e^{-s pi nz} / (pi s)
template <class Real>
Real f_energy_hom(Sector s, Real sigma, Real nz) {
  using std::exp;
  if (!(sigma > Real(0))) throw DomainError("sigma must be positive");
  if (nz < Real(cuboid_start(s))) throw DomainError("nz below the sector start");
  const Real ps = pi<Real>() * sigma;
  return (Real(4) / (ps * ps) + Real(4) * nz / ps + Real(2) * nz * nz) * exp(-ps * nz) / ps;
}

/// 2 nz^2 e^{-s pi nz} / (pi s)
template <class Real>
Real f_stress_hom(Sector s, Real sigma, Real nz) {
  using std::exp;
  if (!(sigma > Real(0))) throw DomainError("sigma must be positive");
  if (nz < Real(cuboid_start(s))) throw DomainError("nz below the sector start");
  const Real ps = pi<Real>() * sigma;
  return Real(2) * nz * nz * exp(-ps * nz) / ps;
}

/// Sum of terms c x^a sigma^b, all multiplied by e^{-pi sigma x}.
///
/// Every homogeneous-cuboid quantity with the exponential regulator lives in
/// this class, so Gamma can be expanded in sigma exactly.
template <class Real>
struct ExpPolynomial {
  // (a, b) -> c
  std::map<std::pair<int, int>, Real> terms;

  void add(int a, int b, Real c) {
    auto& v = terms[{a, b}];
    v += c;
  }

  /// d/dx, using d/dx[x^a e^{-pi s x}] = a x^{a-1} e - pi s x^a e.
  ExpPolynomial derivative() const {
    ExpPolynomial d;
    for (const auto& [ab, c] : terms) {
      const auto [a, b] = ab;
      if (a > 0) d.add(a - 1, b, c * Real(a));
      d.add(a, b + 1, -pi<Real>() * c);
    }
    return d;
  }

  /// Laurent polynomial L(sigma) such that f(n) = e^{-pi sigma n} L(sigma).
  std::map<int, Real> at(int n) const {
    std::map<int, Real> l;
    for (const auto& [ab, c] : terms) {
      const auto [a, b] = ab;
      Real v = c;
      for (int i = 0; i < a; ++i) v *= Real(n);
      if (a == 0 || n != 0) l[b] += v;
    }
    return l;
  }

  /// Laurent polynomial of int_n^inf f dx, again up to e^{-pi sigma n}.
  std::map<int, Real> tail(int n) const {
    // int_n^inf x^a e^{-px} dx = e^{-pn} sum_i a!/(a-i)! n^{a-i} / p^{i+1}
    std::map<int, Real> l;
    const Real p = pi<Real>();
    for (const auto& [ab, c] : terms) {
      const auto [a, b] = ab;
      Real falling(1);
      for (int i = 0; i <= a; ++i) {
        Real v = c * falling;
        for (int j = 0; j < a - i; ++j) v *= Real(n);
        for (int j = 0; j <= i; ++j) v /= p;
        if (a - i == 0 || n != 0) l[b - i - 1] += v;
        falling *= Real(a - i);
      }
    }
    return l;
  }

  Real operator()(Real x, Real sigma) const {
    using std::exp;
    using std::pow;
    Real s(0);
    for (const auto& [ab, c] : terms) s += c * pow(x, ab.first) * pow(sigma, ab.second);
    return s * exp(-pi<Real>() * sigma * x);
  }
};

template <class Real>
ExpPolynomial<Real> energy_hom_poly() {
  const Real p = pi<Real>();
  ExpPolynomial<Real> e;
  e.add(0, -3, Real(4) / (p * p * p));
  e.add(1, -2, Real(4) / (p * p));
  e.add(2, -1, Real(2) / p);
  return e;
}

template <class Real>
ExpPolynomial<Real> stress_hom_poly() {
  ExpPolynomial<Real> e;
  e.add(2, -1, Real(2) / pi<Real>());
  return e;
}

/// Laurent expansion of Gamma^n_m for an exponential-polynomial summand.
template <class Real>
struct GammaSeries {
  std::map<int, Real> laurent;  // Gamma = e^{-pi sigma n} * laurent(sigma)
  int n = 0;

  /// Coefficient of sigma^k in the full expansion, k <= 0.
  Real coefficient(int k) const {
    // e^{-pi n s} = sum_j (-pi n)^j s^j / j!
    const Real x = -pi<Real>() * Real(n);
    Real c(0);
    for (const auto& [i, li] : laurent) {
      const int j = k - i;
      if (j < 0) continue;
      Real t = li;
      for (int q = 1; q <= j; ++q) t *= x / Real(q);
      c += t;
    }
    return c;
  }

  Real constant() const { return coefficient(0); }

  Real operator()(Real sigma) const {
    using std::exp;
    using std::pow;
    Real s(0);
    for (const auto& [i, li] : laurent) s += li * pow(sigma, i);
    return s * exp(-pi<Real>() * sigma * Real(n));
  }
};

template <class Real>
GammaSeries<Real> gamma_series(const ExpPolynomial<Real>& f, int n, int m) {
  GammaSeries<Real> g;
  g.n = n;
  for (const auto& [b, c] : f.at(n)) g.laurent[b] += c / Real(2);
  ExpPolynomial<Real> d = f;
  Real fact(1);
  for (int r = 1; r <= 2 * m; ++r) {
    d = d.derivative();
    fact *= Real(r);
    if (r % 2 == 1) {
      // B_{r+1}/(r+1)! f^(r)
      const Real coef = bernoulli_number(r + 1).template as<Real>() / (fact * Real(r + 1));
      for (const auto& [b, c] : d.at(n)) g.laurent[b] -= coef * c;
    }
  }
  for (const auto& [b, c] : f.tail(n)) g.laurent[b] += c;
  return g;
}

/// Coefficient of sigma^k in sum_{j=n}^{n0-1} f(j) + Gamma^{n0}_m[f].
template <class Real>
Real shifted_series_coefficient(const ExpPolynomial<Real>& f, int n, int n0, int m, int k) {
  Real c = gamma_series(f, n0, m).coefficient(k);
  for (int j = n; j < n0; ++j) {
    GammaSeries<Real> term;
    term.n = j;
    term.laurent = f.at(j);
    c += term.coefficient(k);
  }
  return c;
}

template <class Real>
Jet<Real> exp_poly_jet(const ExpPolynomial<Real>& f, Real x0, Real sigma, int order) {
  auto x = Jet<Real>::variable(x0, order);
  Jet<Real> poly(order);
  for (const auto& [ab, c] : f.terms) {
    using std::pow;
    poly += pow(x, ab.first) * (c * pow(sigma, ab.second));
  }
  return poly * exp(x * (-pi<Real>() * sigma));
}

namespace detail {

// 2 int_x^inf y^q exp(-c y^p) dy = 2 Gamma((q+1)/p, c x^p) / (p c^{(q+1)/p})
template <class Real>
Real power_moment(int q, Real x, Real c, Real p) {
  using std::pow;
  const Real a = Real(q + 1) / p;
  return Real(2) * boost::math::tgamma(a, c * pow(x, p)) / (p * pow(c, a));
}

// exp(-c x^p) as a jet; integer powers 1 and 2 stay smooth at x = 0.
template <class Real>
Jet<Real> regulator_jet(const Jet<Real>& x, Real c, Real p) {
  using std::pow;
  if (p == Real(1)) return exp(x * (-c));
  if (p == Real(2)) return exp(x * x * (-c));
  if (!(x.value() > Real(0))) throw DomainError("non-integer regulator power is not smooth at 0");
  return exp(pow(x, p) * (-c));
}

}  // namespace detail

/// Homogeneous cuboid energy family with regulator exp(-sigma Omega^p).
///
/// p = 1 uses the closed exponential-polynomial form; other powers use
/// incomplete gamma functions.
template <class Real>
SummandFamily<Real> energy_hom_family(Sector s, Real p = Real(1)) {
  SummandFamily<Real> f;
  f.name = "cuboid-energy-" + to_string(s);
  f.n_min = cuboid_start(s);
  f.analytic_tail = true;
  if (p == Real(1)) {
    const auto poly = energy_hom_poly<Real>();
    f.value = [s](Real k, Real sigma) { return f_energy_hom<Real>(s, sigma, k); };
    f.jet = [poly](Real k, Real sigma, int order, int) { return exp_poly_jet(poly, k, sigma, order); };
    f.series = [poly](int n, int n0, int m, int k) { return shifted_series_coefficient(poly, n, n0, m, k); };
    f.tail = [](Real n, Real sigma) {
      using std::exp;
      const Real ps = pi<Real>() * sigma;
      return (Real(12) / (ps * ps) + Real(8) * n / ps + Real(2) * n * n) * exp(-ps * n) / (ps * ps);
    };
    return f;
  }
  // F(x) = 2 int_x^inf y^2 W(y) dy, W = exp(-sigma (pi y)^p)
  f.value = [p](Real k, Real sigma) {
    using std::pow;
    return detail::power_moment<Real>(2, k, sigma * pow(pi<Real>(), p), p);
  };
  f.jet = [p, value = f.value](Real k, Real sigma, int order, int from) {
    using std::pow;
    if (order == 0) return Jet<Real>(0, value(k, sigma));
    auto x = Jet<Real>::variable(k, order - 1);
    Jet<Real> fp = x * x * detail::regulator_jet(x, sigma * pow(pi<Real>(), p), p) * Real(-2);
    return fp.integrate(from == 0 ? value(k, sigma) : Real(0));
  };
  f.tail = [p](Real n, Real sigma) {
    using std::pow;
    const Real c = sigma * pow(pi<Real>(), p);
    // 2 int_n^inf y^2 (y - n) W dy
    return detail::power_moment<Real>(3, n, c, p) - n * detail::power_moment<Real>(2, n, c, p);
  };
  return f;
}

/// Homogeneous cuboid normal-stress family with regulator exp(-sigma Omega^p).
template <class Real>
SummandFamily<Real> stress_hom_family(Sector s, Real p = Real(1)) {
  SummandFamily<Real> f;
  f.name = "cuboid-stress-" + to_string(s);
  f.n_min = cuboid_start(s);
  f.analytic_tail = true;
  if (p == Real(1)) {
    const auto poly = stress_hom_poly<Real>();
    f.value = [s](Real k, Real sigma) { return f_stress_hom<Real>(s, sigma, k); };
    f.jet = [poly](Real k, Real sigma, int order, int) { return exp_poly_jet(poly, k, sigma, order); };
    f.series = [poly](int n, int n0, int m, int k) { return shifted_series_coefficient(poly, n, n0, m, k); };
    f.tail = [](Real n, Real sigma) {
      using std::exp;
      const Real ps = pi<Real>() * sigma;
      return (Real(4) / (ps * ps) + Real(4) * n / ps + Real(2) * n * n) * exp(-ps * n) / (ps * ps);
    };
    return f;
  }
  // F(x) = x^2 Phi(x), Phi = 2 int_x^inf W
  f.value = [p](Real k, Real sigma) {
    using std::pow;
    return k * k * detail::power_moment<Real>(0, k, sigma * pow(pi<Real>(), p), p);
  };
  f.jet = [p](Real k, Real sigma, int order, int) {
    using std::pow;
    const Real c = sigma * pow(pi<Real>(), p);
    auto x = Jet<Real>::variable(k, order);
    const Real phi0 = detail::power_moment<Real>(0, k, c, p);
    if (order == 0) return Jet<Real>(0, k * k * phi0);
    auto xs = Jet<Real>::variable(k, order - 1);
    Jet<Real> phi = (detail::regulator_jet(xs, c, p) * Real(-2)).integrate(phi0);
    return x * x * phi;
  };
  f.tail = [p](Real n, Real sigma) {
    using std::pow;
    const Real c = sigma * pow(pi<Real>(), p);
    // int_n^inf x^2 Phi = (2/3) int_n^inf W (y^3 - n^3) dy
    return (detail::power_moment<Real>(3, n, c, p) - n * n * n * detail::power_moment<Real>(0, n, c, p)) /
           Real(3);
  };
  return f;
}

// ---------------------------------------------------------------------------
// ENZ waveguide

/// I^{p,q}_{(a,b)} = int_a^b u^{p/2} (1+4u)^{-q/2} e^{-sigma sqrt(u)} du.
template <class Real>
struct IpqSpec {
  int p = 1;
  int q = 0;
  Real a = Real(0);
  Real b = std::numeric_limits<Real>::infinity();
  Real sigma = Real(0);
};

template <class Real>
QuadratureResult<Real> i_pq(const IpqSpec<Real>& spec, Real rel_tol = Real(1e-12)) {
  using std::exp;
  using std::pow;
  using std::sqrt;
  if (spec.a < Real(0) || !(spec.b > spec.a)) throw DomainError("I^{p,q} needs 0 <= a < b");
  const bool infinite = spec.b == std::numeric_limits<Real>::infinity();
  if (infinite && !(spec.sigma > Real(0)))
    throw DomainError("I^{p,q} on an infinite range needs sigma > 0");
  // u = y^2 turns the sqrt kernel into a smooth integrand.
  auto f = [&](Real y) {
    return Real(2) * pow(y, spec.p + 1) * pow(Real(1) + Real(4) * y * y, -Real(spec.q) / Real(2)) *
           exp(-spec.sigma * y);
  };
  const Real ya = sqrt(spec.a);
  if (infinite) {
    const Real scale = ya > Real(1) ? ya : Real(1);
    return integrate_to_infinity<Real>(f, ya, rel_tol, scale);
  }
  return integrate_finite<Real>(f, ya, sqrt(spec.b), rel_tol);
}

/// Lower-limit polynomial g(l) = l^2 + k l + c of an ENZ sector.
struct EnzSector {
  int k;
  int c;
};

inline EnzSector enz_sector(Sector s) { return s == Sector::TE ? EnzSector{1, 0} : EnzSector{3, 2}; }

namespace detail {

template <class Real>
Real enz_scale(Real y0, Real sigma) {
  const Real s = Real(1) + y0;
  (void)sigma;
  return s;
}

// F(l) = int_{sqrt g}^inf 2 y^2 (1 - (1+2l)/sqrt(1+4y^2)) e^{-sigma y} dy,
// written in t = y - sqrt(g) with the bracket in cancellation-free form.
template <class Real>
Real enz_value(EnzSector sec, Real l, Real sigma, Real rel_tol) {
  using std::exp;
  using std::sqrt;
  const Real g = l * l + Real(sec.k) * l + Real(sec.c);
  const Real y0 = sqrt(g);
  const Real excess = Real(sec.k - 1) * l + Real(sec.c);  // g - l^2 - l
  const Real e0 = exp(-sigma * y0);
  auto f = [&](Real t) {
    const Real y = y0 + t;
    const Real s = sqrt(Real(1) + Real(4) * y * y);
    const Real num = Real(4) * (t * (t + Real(2) * y0) + excess);
    return Real(2) * y * y * num / (s * (s + Real(1) + Real(2) * l)) * exp(-sigma * t);
  };
  return e0 * integrate_to_infinity<Real>(f, Real(0), rel_tol, enz_scale(y0, sigma)).value;
}

// B(g) = int_{sqrt g}^inf 2 y^2 / sqrt(1+4y^2) e^{-sigma y} dy
template <class Real>
Real enz_b_integral(Real y0, Real sigma, Real rel_tol) {
  using std::exp;
  using std::sqrt;
  auto f = [&](Real t) {
    const Real y = y0 + t;
    return Real(2) * y * y / sqrt(Real(1) + Real(4) * y * y) * exp(-sigma * t);
  };
  return exp(-sigma * y0) * integrate_to_infinity<Real>(f, Real(0), rel_tol, enz_scale(y0, sigma)).value;
}

// int_n^inf F(x) dx by exchanging the order of integration: for fixed u the
// x-range is [n, x0(u)] with g(x0) = u.
template <class Real>
Real enz_tail(EnzSector sec, Real n, Real sigma, Real rel_tol) {
  using std::exp;
  using std::sqrt;
  const Real g = n * n + Real(sec.k) * n + Real(sec.c);
  const Real y0 = sqrt(g);
  const Real rn = Real(2) * n + Real(sec.k);  // sqrt of the discriminant at u = g(n)
  auto f = [&](Real t) {
    const Real y = y0 + t;
    const Real du = t * (t + Real(2) * y0);  // u - g(n)
    const Real dx = Real(2) * du / (sqrt(rn * rn + Real(4) * du) + rn);  // x0 - n
    const Real x0 = n + dx;
    const Real s = sqrt(Real(1) + Real(4) * y * y);
    // int_n^{x0} (1 + 2x) dx = (x0 - n)(x0 + n + 1)
    return Real(2) * y * y * (dx - dx * (x0 + n + Real(1)) / s) * exp(-sigma * t);
  };
  return exp(-sigma * y0) * integrate_to_infinity<Real>(f, Real(0), rel_tol, enz_scale(y0, sigma)).value;
}

}  // namespace detail

/// Dimensionless ENZ auxiliary function F^s_sigma(l).
template <class Real>
Real f_energy_enz(Sector s, Real sigma, Real l, Real rel_tol = default_quadrature_tol<Real>()) {
  if (!(sigma > Real(0))) throw DomainError("sigma must be positive");
  if (l < Real(0)) throw DomainError("l must be non-negative");
  return detail::enz_value(enz_sector(s), l, sigma, rel_tol);
}

/// Taylor jet of F^s_sigma about l0.
///
/// F'(l) = -g'(l) h(l) - 2 B(g(l)) with h the integrand at the lower limit;
/// every higher derivative is local. `from` >= 2 skips both quadratures, so
/// sigma = 0 is allowed there.
template <class Real>
Jet<Real> f_energy_enz_jet(Sector s, Real l0, Real sigma, int order, int from = 0,
                           Real rel_tol = default_quadrature_tol<Real>()) {
  using std::sqrt;
  const EnzSector sec = enz_sector(s);
  if (order == 0) return Jet<Real>(0, detail::enz_value(sec, l0, sigma, rel_tol));
  const int n = order - 1;
  auto l = Jet<Real>::variable(l0, n);
  Jet<Real> g = l * l + l * Real(sec.k) + Real(sec.c);
  Jet<Real> y = sqrt(g);  // throws when g(l0) = 0: sqrt is not analytic there
  Jet<Real> sq = sqrt(g * Real(4) + Real(1));
  Jet<Real> e = exp(y * (-sigma));
  Jet<Real> gp = l * Real(2) + Real(sec.k);
  Jet<Real> b = y / sq * e;
  Jet<Real> excess = l * Real(sec.k - 1) + Real(sec.c);
  Jet<Real> h = y * excess * Real(4) / (sq * (sq + l * Real(2) + Real(1))) * e;
  const Real b0 = from <= 1 ? detail::enz_b_integral(y.value(), sigma, rel_tol) : Real(0);
  Jet<Real> bint = (Real(0) - b * gp).truncated(n > 0 ? n - 1 : 0);
  Jet<Real> big_b = n > 0 ? bint.integrate(b0) : Jet<Real>(0, b0);
  Jet<Real> fp = Real(0) - h * gp - big_b * Real(2);
  const Real f0 = from == 0 ? detail::enz_value(sec, l0, sigma, rel_tol) : Real(0);
  return fp.integrate(f0);
}

template <class Real>
SummandFamily<Real> energy_enz_family(Sector s, Real rel_tol = default_quadrature_tol<Real>()) {
  SummandFamily<Real> f;
  f.name = "enz-energy-" + to_string(s);
  f.n_min = 0;
  const EnzSector sec = enz_sector(s);
  f.value = [sec, rel_tol](Real l, Real sigma) { return detail::enz_value(sec, l, sigma, rel_tol); };
  f.jet = [s, rel_tol](Real l, Real sigma, int order, int from) {
    return f_energy_enz_jet<Real>(s, l, sigma, order, from, rel_tol);
  };
  f.tail = [sec, rel_tol](Real n, Real sigma) { return detail::enz_tail(sec, n, sigma, rel_tol); };
  return f;
}

// ---------------------------------------------------------------------------
// ENZ normal stress across the plane z = z0

/// Stress bracket at Z. TE: (Y')^2 - Y Y''. TM: (Y')^2 - (Y / cosh) (cosh Y)''
/// + Y^2 (3 cosh^2 - 1) / cosh^2, expanded so no cosh factor grows.
template <class Real = double>
Real stress_bracket(Sector s, const ModeFunction<Real>& m, Real z) {
  using std::cosh;
  using std::tanh;
  const auto v = m.eval(z);
  Real b = v.d1 * v.d1 - v.value * v.d2;
  if (s == Sector::TM) {
    const Real c = cosh(z);
    b += Real(2) * v.value * v.value - Real(2) * tanh(z) * v.value * v.d1 - v.value * v.value / (c * c);
  }
  return b;
}

/// Transverse parameter at continuum wavenumber rho.
inline double theta_continuum(Sector s, double rho, const GuideGeometry& g) {
  const double t = g.a * g.a * rho * rho;
  return s == Sector::TE ? t : t + 1.0;
}

/// f-bar^s(l, z0, rho) in units hbar = c = eps0 = 1.
inline double stress_integrand_enz(Sector s, int l, double z0, double rho, const GuideGeometry& g) {
  g.validate();
  if (rho < 0) throw DomainError("rho must be non-negative");
  const double th = theta_continuum(s, rho, g);
  if (th == 0.0) throw ExcludedMode("TE mode with vanishing transverse wavenumber is pure gauge");
  const auto m = mode_function<double>(l, th);
  const double norm = m.weighted_norm();
  return stress_bracket(s, m, z0 / g.a) / (4.0 * std::sqrt(g.kappa0) * g.a * m.omega() * norm);
}

/// (1/2pi) int_0^inf rho f-bar(l, z0, rho) exp(-sigma Omega) d rho.
///
/// The cosh-power series cancels at large theta, so double evaluation holds
/// about 8 digits; the default tolerance reflects that.
inline double f_stress_enz(Sector s, double sigma, int l, double z0, const GuideGeometry& g,
                           double rel_tol = 1e-8) {
  if (!(sigma > 0)) throw DomainError("sigma must be positive");
  if (l < 0) throw DomainError("l must be non-negative");
  g.validate();
  auto f = [&](double rho) {
    if (rho == 0.0) return 0.0;
    const double th = theta_continuum(s, rho, g);
    const auto m = mode_function<double>(l, th);
    const double w = m.omega();
    const double fb = stress_bracket(s, m, z0 / g.a) / (4.0 * std::sqrt(g.kappa0) * g.a * w * m.weighted_norm());
    return rho * fb * std::exp(-sigma * w);
  };
  const auto q = integrate_to_infinity<double>(f, 0.0, rel_tol, 1.0 / g.a);
  return q.value / (2.0 * pi<double>());
}

namespace detail {

/// Taylor jet in t of D(x) = lgamma(x) - lgamma(x + 1/2) at x = x0 + slope t.
template <class Real>
Jet<Real> half_delta_lgamma(Real x0, Real slope, int order) {
  using std::log;
  const Real half = Real(1) / Real(2);
  Jet<Real> r(order, log(boost::math::tgamma_delta_ratio(x0, half)));
  Real sp = slope;
  Real fact(1);
  for (int k = 1; k <= order; ++k) {
    fact *= Real(k);
    r[k] = (boost::math::polygamma(k - 1, x0) - boost::math::polygamma(k - 1, x0 + half)) * sp / fact;
    sp *= slope;
  }
  return r;
}

// y R / Omega exp(-sigma Omega) at Z = 0 as a jet in j, with l = 2 j + parity
// and y = a rho. R is the bracket over the weighted norm. With
// Y = sech^q C_l(tanh Z) / C_l(1), lambda = q + 1/2, the Gegenbauer values
// at 0 and the duplication formula give
//   even: ln R = D(j + lambda) + D(j + 1/2) + ln(l + lambda) - ln pi, times (Omega^2 - theta)
//   odd:  ln R = -D(j + lambda + 1/2) - D(j + 1) + ln(l + lambda) + 2 ln 2 - ln pi
template <class Real>
Jet<Real> enz_stress_density(Sector s, int parity, Real j0, Real y, Real sigma, int order) {
  using std::log;
  using std::sqrt;
  const Real q = s == Sector::TE ? y : sqrt(y * y + Real(1));
  const Real half = Real(1) / Real(2);
  const Real lam = q + half;
  auto j = Jet<Real>::variable(j0, order);
  Jet<Real> l = j * Real(2) + Real(parity);
  Jet<Real> lr = log(l + lam) - log(pi<Real>());
  if (parity == 0) {
    lr += half_delta_lgamma(j0 + lam, Real(1), order) + half_delta_lgamma(j0 + half, Real(1), order);
  } else {
    lr += Real(2) * log(Real(2));
    lr -= half_delta_lgamma(j0 + lam + half, Real(1), order) + half_delta_lgamma(j0 + Real(1), Real(1), order);
  }
  Jet<Real> w2 = (l + q) * (l + q + Real(1));
  Jet<Real> r = exp(lr);
  // Even modes: Y'' = (theta - Omega^2) Y at Z = 0 turns -Y Y'' into Y^2 (Omega^2 - theta).
  if (parity == 0) r = r * (w2 - q * q + (s == Sector::TM ? Real(1) : Real(0)));
  Jet<Real> w = sqrt(w2);
  return r / w * exp(w * (-sigma)) * y;
}

template <class Real>
Real enz_stress_scale(Real sigma) {
  return Real(1) + Real(1) / (Real(8) * sigma);
}

}  // namespace detail

/// ENZ normal-stress summand at z0 = 0 for one parity class, as a family in j
/// with l = 2 j + parity. Matches f_stress_enz at integer j.
template <class Real>
SummandFamily<Real> stress_enz_family(Sector s, int parity, const GuideGeometry& g,
                                      Real rel_tol = Real(1e-15)) {
  if (parity != 0 && parity != 1) throw DomainError("parity must be 0 or 1");
  using std::sqrt;
  g.validate();
  const Real pre = Real(1) / (Real(8) * pi<Real>() * sqrt(Real(g.kappa0)) * Real(g.a) * Real(g.a) * Real(g.a));
  SummandFamily<Real> f;
  f.name = "enz-stress-" + to_string(s) + (parity == 0 ? "-even" : "-odd");
  f.n_min = 0;
  f.value = [s, parity, pre, rel_tol](Real j, Real sigma) {
    if (!(sigma > Real(0))) throw DomainError("sigma must be positive");
    auto d = [&](Real y) { return detail::enz_stress_density<Real>(s, parity, j, y, sigma, 0)[0]; };
    return pre * integrate_to_infinity<Real>(d, Real(0), rel_tol, detail::enz_stress_scale(sigma)).value;
  };
  f.jet = [s, parity, pre, rel_tol](Real j, Real sigma, int order, int) {
    if (!(sigma > Real(0))) throw DomainError("sigma must be positive");
    auto d = [&](Real y) {
      auto jet = detail::enz_stress_density<Real>(s, parity, j, y, sigma, order);
      std::vector<Real> v(static_cast<std::size_t>(order) + 1);
      for (int k = 0; k <= order; ++k) v[static_cast<std::size_t>(k)] = jet[k];
      return v;
    };
    auto v = integrate_to_infinity_vec<Real>(d, Real(0), rel_tol, detail::enz_stress_scale(sigma));
    Jet<Real> r(order);
    for (int k = 0; k <= order; ++k) r[k] = pre * v[static_cast<std::size_t>(k)];
    return r;
  };
  f.tail = [f, rel_tol](Real n, Real sigma) {
    auto inner = [&](Real j) { return f.value(j, sigma); };
    return integrate_to_infinity<Real>(inner, n, rel_tol * Real(100), detail::enz_stress_scale(sigma)).value;
  };
  return f;
}

}  // namespace emreg
