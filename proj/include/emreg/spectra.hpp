#pragma once

#include "emreg/calculus.hpp"
#include "emreg/error.hpp"
#include "emreg/real.hpp"

#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace emreg {

enum class Sector { TE, TM };

inline std::string to_string(Sector s) { return s == Sector::TE ? "TE" : "TM"; }

enum class System { Cuboid, Enz };

inline std::string to_string(System s) { return s == System::Cuboid ? "cuboid" : "enz"; }

/// Cross-section Lx x Ly, profile scale a and permittivity amplitude kappa0.
struct GuideGeometry {
  double lx = 1.0;
  double ly = 1.0;
  double a = 1.0;
  double kappa0 = 1.0;

  void validate() const {
    if (!(lx > 0) || !(ly > 0) || !(a > 0)) throw DomainError("geometry lengths must be positive");
    if (!(kappa0 > 0)) throw DomainError("kappa0 must be positive");
  }
};

/// Sector plus labels: (l, nx, ny) in the guide, (nx, ny, nz) in the cuboid.
struct ModeIndex {
  Sector sector = Sector::TE;
  int l = 0;
  int nx = 0;
  int ny = 0;
  int nz = 0;

  static ModeIndex enz(Sector s, int l, int nx, int ny) { return {s, l, nx, ny, 0}; }
  static ModeIndex cuboid(Sector s, int nx, int ny, int nz) { return {s, 0, nx, ny, nz}; }

  /// Throws ExcludedMode for pure-gauge label sets.
  void validate(System system) const {
    if (l < 0 || nx < 0 || ny < 0 || nz < 0) throw DomainError("mode labels must be non-negative");
    if (nx == 0 && ny == 0) throw ExcludedMode("nx = ny = 0 modes carry no field");
    if (sector == Sector::TM && (nx == 0 || ny == 0)) throw ExcludedMode("TM modes need nx, ny >= 1");
    if (system == System::Cuboid && sector == Sector::TE && nz < 1) throw ExcludedMode("cuboid TE modes need nz >= 1");
  }
};

/// chi^2 for TE, chi^2 + 1 for TM, chi = a sqrt(kx^2 + ky^2).
inline double theta(Sector s, int nx, int ny, const GuideGeometry& g) {
  if (nx < 0 || ny < 0) throw DomainError("mode labels must be non-negative");
  const double p = pi<double>();
  const double chi2 = p * p * g.a * g.a * (double(nx) * nx / (g.lx * g.lx) + double(ny) * ny / (g.ly * g.ly));
  return s == Sector::TE ? chi2 : chi2 + 1.0;
}

/// Omega with Omega^2 = (l + sqrt(theta))(l + sqrt(theta) + 1).
template <class Real = double>
Real omega_enz(Real l, Real theta) {
  using std::sqrt;
  if (l < Real(0) || theta < Real(0)) throw DomainError("omega_enz needs l >= 0 and theta >= 0");
  const Real nu = l + sqrt(theta);
  return sqrt(nu * (nu + Real(1)));
}

inline double cuboid_omega(int nx, int ny, int nz, const GuideGeometry& g) {
  if (nx < 0 || ny < 0 || nz < 0) throw DomainError("mode labels must be non-negative");
  const double p = pi<double>();
  const double kx = nx * p / g.lx;
  const double ky = ny * p / g.ly;
  const double kz = nz * p / g.a;
  return g.a * std::sqrt(kx * kx + ky * ky + kz * kz);
}

/// Value and first two Z-derivatives of a mode function.
template <class Real>
struct ModeValue {
  Real value;
  Real d1;
  Real d2;
};

/// Bound state of Y'' + (Omega^2 sech^2 Z - theta) Y = 0.
///
/// Even l: Y = sum_r C_r cosh^{-(q+2r)}(Z); odd l: Y = sinh(Z) sum_r C_r
/// cosh^{-(q+1+2r)}(Z), with q = sqrt(theta) and C_0 = 1.
template <class Real = double>
struct ModeFunction {
  int l = 0;
  Real theta = Real(0);
  Real exponent = Real(0);  // q = sqrt(theta)
  bool odd = false;
  std::vector<Real> coefficients;

  Real omega2() const { return (Real(l) + exponent) * (Real(l) + exponent + Real(1)); }
  Real omega() const {
    using std::sqrt;
    return sqrt(omega2());
  }

  ModeValue<Real> eval(Real z) const {
    using std::abs;
    using std::exp;
    using std::pow;
    // sech and tanh from exp(-|Z|): no overflow for any Z.
    const Real e = exp(-Real(2) * abs(z));
    const Real sech = Real(2) * exp(-abs(z)) / (Real(1) + e);
    const Real th = (z < Real(0) ? Real(-1) : Real(1)) * (Real(1) - e) / (Real(1) + e);
    const Real s2 = sech * sech;
    ModeValue<Real> out{Real(0), Real(0), Real(0)};
    if (sech == Real(0)) return out;
    for (std::size_t r = 0; r < coefficients.size(); ++r) {
      const Real c = coefficients[r];
      if (!odd) {
        // sech^a: (sech^a)' = -a tanh sech^a, (sech^a)'' = a^2 sech^a - a(a+1) sech^(a+2)
        const Real a = exponent + Real(2 * static_cast<int>(r));
        const Real p = pow(sech, a);
        out.value += c * p;
        out.d1 += c * (-a * th * p);
        out.d2 += c * (a * a * p - a * (a + Real(1)) * p * s2);
      } else {
        // sinh cosh^-b = tanh sech^(b-1)
        const Real b = exponent + Real(1 + 2 * static_cast<int>(r));
        const Real p = pow(sech, b - Real(1));
        out.value += c * th * p;
        out.d1 += c * ((Real(1) - b) * p + b * p * s2);
        out.d2 += c * th * ((Real(1) - b) * (Real(1) - b) * p - b * (b + Real(1)) * p * s2);
      }
    }
    return out;
  }

  Real operator()(Real z) const { return eval(z).value; }

  /// |Y'' + (Omega^2 sech^2 Z - theta) Y|
  Real residual(Real z) const {
    using std::abs;
    using std::cosh;
    const auto v = eval(z);
    const Real c = cosh(z);
    return abs(v.d2 + (omega2() / (c * c) - theta) * v.value);
  }

  /// int Y^2 sech^2 dZ in closed form.
  ///
  /// Y = sech^q C_l^(q+1/2)(tanh Z) / C_l^(q+1/2)(1), so the Gegenbauer norm gives
  /// sqrt(pi) G(q+1)/G(q+1/2) l! G(2q+1)/G(2q+1+l) / (l+q+1/2), free of the
  /// cancellation in the cosh-power expansion.
  Real weighted_norm() const {
    using std::sqrt;
    const Real half = Real(1) / Real(2);
    const Real q = exponent;
    return sqrt(pi<Real>()) * boost::math::tgamma_ratio(q + Real(1), q + half) *
           boost::math::factorial<Real>(static_cast<unsigned>(l)) *
           boost::math::tgamma_delta_ratio(Real(2) * q + Real(1), Real(l)) / (Real(l) + q + half);
  }
};

/// Frobenius solution for label l at transverse parameter theta.
///
/// With exponents e_r = q + p + 2r (p = l mod 2), equating powers of sech
/// gives C_r = -C_{r-1} (Omega^2 - e_{r-1}(e_{r-1}+1)) / (4 r (q + r)).
template <class Real = double>
ModeFunction<Real> mode_function(int l, Real theta) {
  using std::sqrt;
  if (l < 0) throw DomainError("l must be non-negative");
  if (theta < Real(0)) throw DomainError("theta must be non-negative");
  ModeFunction<Real> m;
  m.l = l;
  m.theta = theta;
  m.exponent = sqrt(theta);
  m.odd = l % 2 == 1;
  const int p = l % 2;
  const int terms = (l - p) / 2 + 1;
  const Real w2 = m.omega2();
  m.coefficients.assign(static_cast<std::size_t>(terms), Real(0));
  m.coefficients[0] = Real(1);
  for (int r = 1; r < terms; ++r) {
    const Real e = m.exponent + Real(p + 2 * (r - 1));
    const Real den = Real(4 * r) * (m.exponent + Real(r));
    m.coefficients[static_cast<std::size_t>(r)] =
        -m.coefficients[static_cast<std::size_t>(r - 1)] * (w2 - e * (e + Real(1))) / den;
  }
  return m;
}

/// int Y_l Y_l' sech^2 dZ over the real line by quadrature.
template <class Real = double>
Real orthogonality_integral(int l, int lp, Real theta, Real rel_tol = Real(1e-12)) {
  using std::sqrt;
  const auto a = mode_function<Real>(l, theta);
  const auto b = mode_function<Real>(lp, theta);
  if (a.odd != b.odd) return Real(0);
  auto f = [&](Real z) {
    using std::cosh;
    const Real c = cosh(z);
    return a(z) * b(z) / (c * c);
  };
  // Absolute floor relative to the norms, so orthogonal pairs terminate.
  const Real floor = rel_tol * sqrt(a.weighted_norm() * b.weighted_norm());
  const auto q = integrate_to_infinity<Real>(f, Real(0), rel_tol, Real(1), floor);
  return Real(2) * q.value;
}

/// I^s = int Z^2 sech^2 dZ by quadrature.
template <class Real = double>
Real normalization_integral(int l, Real theta, Real rel_tol = Real(1e-12)) {
  return orthogonality_integral<Real>(l, l, theta, rel_tol);
}

/// Squared normalization constant in units hbar = eps0 = c = 1.
inline double normalization_constant(const ModeIndex& mode, System system, const GuideGeometry& g) {
  g.validate();
  mode.validate(system);
  const double p = pi<double>();
  const double kx = mode.nx * p / g.lx;
  const double ky = mode.ny * p / g.ly;
  const double k2 = kx * kx + ky * ky;
  const double area = g.lx * g.ly;
  if (system == System::Cuboid) {
    const double w = cuboid_omega(mode.nx, mode.ny, mode.nz, g) / (g.a * std::sqrt(g.kappa0));
    if (mode.sector == Sector::TE) {
      const double nf = (mode.nx == 0 || mode.ny == 0) ? 0.5 : 1.0;
      return 4.0 * nf / (g.kappa0 * area * g.a * k2 * w);
    }
    const double nf = mode.nz == 0 ? 0.5 : 1.0;
    return 4.0 * nf / (g.kappa0 * area * g.a * k2 * w * w * w);
  }
  const double th = theta(mode.sector, mode.nx, mode.ny, g);
  const double w = omega_enz<double>(mode.l, th) / (g.a * std::sqrt(g.kappa0));
  const double i = normalization_integral<double>(mode.l, th);
  if (mode.sector == Sector::TE) {
    const double nf = (mode.nx == 0 || mode.ny == 0) ? 0.5 : 1.0;
    return 2.0 * nf / (g.kappa0 * area * k2 * w * i);
  }
  return 2.0 / (g.kappa0 * area * k2 * w * w * w * i);
}

}  // namespace emreg
