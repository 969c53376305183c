#pragma once

#include "emreg/calculus.hpp"
#include "emreg/error.hpp"
#include "emreg/real.hpp"
#include "emreg/spectra.hpp"

#include <cmath>
#include <cstdint>

namespace emreg {

/// Number of guide modes (l, nx, ny) of sector s with Omega <= omega, Lx = Ly = L.
///
/// Per (nx, ny) the admissible l form the range 0 <= l <= u* - sqrt(theta)
/// with u* = (sqrt(4 omega^2 + 1) - 1)/2, so only the transverse box is walked.
inline std::int64_t count_modes_brute(Sector s, double omega, double L, double a,
                                      std::int64_t budget = 400'000'000) {
  if (!(omega >= 0)) throw DomainError("omega must be non-negative");
  if (!(L > 0) || !(a > 0)) throw DomainError("lengths must be positive");
  const GuideGeometry g{L, L, a, 1.0};
  const double w2 = omega * omega;
  const double ustar = 0.5 * (std::sqrt(4 * w2 + 1) - 1);
  // sqrt(theta) >= chi = pi a n / L, so n <= u* L / (pi a)
  const auto nmax = static_cast<std::int64_t>(std::floor(ustar * L / (pi<double>() * a))) + 1;
  if (nmax * nmax > budget) throw BudgetError("mode enumeration exceeds its budget");
  const int lo = s == Sector::TM ? 1 : 0;
  std::int64_t count = 0;
  for (std::int64_t nx = lo; nx <= nmax; ++nx) {
    for (std::int64_t ny = lo; ny <= nmax; ++ny) {
      if (nx == 0 && ny == 0) continue;
      const double q = std::sqrt(theta(s, static_cast<int>(nx), static_cast<int>(ny), g));
      if (q > ustar + 1e-12) {
        if (ny == lo) return count;
        break;
      }
      auto lmax = static_cast<std::int64_t>(std::floor(ustar - q));
      // settle rounding at the boundary on the exact spectral condition
      while (lmax >= 0 && (lmax + q) * (lmax + q + 1) > w2) --lmax;
      while ((lmax + 1 + q) * (lmax + 2 + q) <= w2) ++lmax;
      count += lmax + 1;
    }
  }
  return count;
}

/// Continuum volume V^s_Omega of the region Omega^s <= omega in (l, nx, ny).
inline double dos_volume_analytic(Sector s, double omega, double L, double a) {
  if (!(omega >= 0)) throw DomainError("omega must be non-negative");
  if (!(L > 0) || !(a > 0)) throw DomainError("lengths must be positive");
  const double p = pi<double>();
  const double w2 = omega * omega;
  const double xi = std::sqrt(4 * w2 + 1);
  const double area = L * L / (a * a);
  if (s == Sector::TE) return area / (96 * p) * (xi - 1) * (xi - 1) * (xi - 1);
  // the TM surface only reaches l = 0 once omega^2 > 2
  if (w2 <= 2) return 0.0;
  return area / (24 * p) * (3 * xi * w2 - 9 * w2 + 4 - (2 * w2 - xi + 1) * std::sqrt(4 * w2 - 2 * xi + 2));
}

/// Positive root u0^s of l(u) = 0 on the iso-spectral surface.
inline double isospectral_root(Sector s, double omega) {
  const double xi = std::sqrt(4 * omega * omega + 1);
  if (s == Sector::TE) return 0.5 * xi - 0.5;
  const double d = 4 * omega * omega - 2 * xi - 2;
  if (d < 0) throw DomainError("TM surface does not reach l = 0 below omega^2 = 2");
  return 0.5 * std::sqrt(d);
}

/// l(u) = (sqrt(4 omega^2 + 1) - 1)/2 - F^s(u), F^TE = u, F^TM = sqrt(u^2 + 1).
inline double isospectral_l(Sector s, double omega, double u) {
  const double f = s == Sector::TE ? u : std::sqrt(u * u + 1);
  return 0.5 * std::sqrt(4 * omega * omega + 1) - 0.5 - f;
}

/// Large-Omega form L^2 Omega^3/(12 pi a^2) - L^2 Omega^2/(8 pi a^2).
inline double dos_volume_asymptotic(double omega, double L, double a) {
  const double p = pi<double>();
  return L * L / (a * a) * (omega * omega * omega / (12 * p) - omega * omega / (8 * p));
}

struct EnergyGrowth {
  double dos_estimate = 0.0;       // from the continuum density of states
  double singular_estimate = 0.0;  // from the fitted sigma^-4 coefficients
  double relative_gap = 0.0;
};

/// Energy growth (1/2) int Omega e^{-sigma Omega} (dN^TE + dN^TM) in units
/// hbar c L^2 / (pi sqrt(kappa0) a^3), next to (c4^TE + c4^TM) / (8 sigma^4).
inline EnergyGrowth energy_growth_leading(double sigma, double c4_sum) {
  if (!(sigma > 0)) throw DomainError("sigma must be positive");
  // by parts: int Omega e^{-s Omega} V' = int V (s Omega - 1) e^{-s Omega}
  auto f = [&](double w) {
    const double v = dos_volume_analytic(Sector::TE, w, 1, 1) + dos_volume_analytic(Sector::TM, w, 1, 1);
    return v * (sigma * w - 1) * std::exp(-sigma * w);
  };
  const auto q = integrate_to_infinity<double>(f, 0.0, 1e-12, 1.0 / sigma);
  EnergyGrowth e;
  e.dos_estimate = 0.5 * q.value * pi<double>();
  e.singular_estimate = c4_sum / (8 * std::pow(sigma, 4));
  e.relative_gap = std::abs(e.dos_estimate - e.singular_estimate) / std::abs(e.singular_estimate);
  return e;
}

}  // namespace emreg
