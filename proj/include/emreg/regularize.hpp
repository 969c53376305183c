#pragma once

#include "emreg/em.hpp"
#include "emreg/extractor.hpp"
#include "emreg/real.hpp"
#include "emreg/spectra.hpp"
#include "emreg/summands.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <vector>

namespace emreg {

/// Casimir energy per area in units hbar c / (sqrt(kappa0) a^3).
inline double casimir_energy_coefficient() { return -pi<double>() * pi<double>() / 720.0; }

/// Casimir pressure in units hbar c / (sqrt(kappa0) a^4).
inline double casimir_pressure_coefficient() { return -pi<double>() * pi<double>() / 240.0; }

/// Closed-form ENZ energy constants (M = 3).
inline double enz_energy_beta_te() {
  const double r2 = std::sqrt(2.0);
  return -5.0 / 1536 - 5339.0 * r2 / 35840 - euler_gamma<double>() / 384 - 43.0 / 768 * std::log(2.0) +
         47.0 / 384 * std::log(4 + 3 * r2);
}

inline double enz_energy_beta_tm() {
  const double r2 = std::sqrt(2.0);
  return -101.0 / 1536 + 34009.0 * r2 / 184320 - 49 * euler_gamma<double>() / 384 +
         245.0 / 768 * std::log(2.0) - 49.0 / 384 * std::log(4 + 3 * r2);
}

/// Default sigma grid and model of the ENZ energy fits.
template <class Real = quad>
EMConfig<Real> enz_energy_config(int m = 3, int points = 64) {
  EMConfig<Real> c;
  c.n = 0;
  c.n0 = -1;
  c.m = m;
  c.sigma_grid = log_grid<Real>(Real(1) / Real(20000), Real(1) / Real(2000), points);
  return c;
}

template <class Real>
struct SectorPair {
  RegularizationReport<Real> te;
  RegularizationReport<Real> tm;

  Real beta() const { return te.beta + tm.beta; }
  Real epsilon() const { return te.epsilon_bound + tm.epsilon_bound; }
};

/// beta^s for the homogeneous cuboid energy; analytic unless spec says otherwise.
template <class Real>
RegularizationReport<Real> cuboid_energy(Sector s, EMConfig<Real> config, const ModelSpec& spec = {},
                                         Real power = Real(1)) {
  config.n = cuboid_start(s);
  if (config.n0 < config.n) config.n0 = config.n;
  return extract_beta(energy_hom_family<Real>(s, power), config, spec);
}

template <class Real>
RegularizationReport<Real> cuboid_stress(Sector s, EMConfig<Real> config, const ModelSpec& spec = {},
                                         Real power = Real(1)) {
  config.n = cuboid_start(s);
  if (config.n0 < config.n) config.n0 = config.n;
  return extract_beta(stress_hom_family<Real>(s, power), config, spec);
}

/// Energy per area from sector constants: (pi^2/8)(beta_TE + beta_TM) / (sqrt(kappa0) a^3).
inline double cuboid_energy_per_area(double beta_sum, const GuideGeometry& g) {
  return pi<double>() * pi<double>() / 8.0 * beta_sum / (std::sqrt(g.kappa0) * g.a * g.a * g.a);
}

inline double cuboid_pressure(double beta_sum, const GuideGeometry& g) {
  return pi<double>() * pi<double>() / 8.0 * beta_sum / (std::sqrt(g.kappa0) * g.a * g.a * g.a * g.a);
}

/// -dE/da by central differences at a(1 +- h), Richardson-extrapolated over h, h/2.
inline double minus_energy_derivative(const std::function<double(double)>& energy, double a, double h = 0.01) {
  auto central = [&](double step) { return -(energy(a * (1 + step)) - energy(a * (1 - step))) / (2 * a * step); };
  const double d1 = central(h);
  const double d2 = central(h / 2);
  return (4 * d2 - d1) / 3;
}

template <class Real>
SectorPair<Real> enz_energy(const EMConfig<Real>& config, const ModelSpec& spec = {}) {
  SectorPair<Real> r;
  r.te = extract_beta(energy_enz_family<Real>(Sector::TE), config, spec);
  r.tm = extract_beta(energy_enz_family<Real>(Sector::TM), config, spec);
  return r;
}

/// ENZ energy per area over the homogeneous Casimir magnitude pi^2/720.
inline double enz_ratio_to_casimir(double beta_sum) {
  return beta_sum / (8.0 * pi<double>()) / (-casimir_energy_coefficient());
}

inline double enz_energy_per_area(double beta_sum, const GuideGeometry& g) {
  return beta_sum / (8.0 * pi<double>() * std::sqrt(g.kappa0) * g.a * g.a * g.a);
}

// ---------------------------------------------------------------------------
// ENZ stress at z0 = 0

/// Default sigma grid of the stress fits. The stress Gamma-hat carries
/// non-analytic terms in sigma that the model does not resolve, so the grid
/// sits away from 0 where the tail bound and the fit noise are comparable.
template <class Real = long double>
EMConfig<Real> enz_stress_config(int m = 3, int points = 32) {
  EMConfig<Real> c;
  c.n = 0;
  c.n0 = 1;
  c.m = m;
  c.sigma_grid = log_grid<Real>(Real(0.02), Real(0.2), points);
  return c;
}

inline ModelSpec enz_stress_model() { return ModelSpec::extended(4, 3); }

template <class Real>
struct StressReport {
  // (sector, parity) -> report
  std::map<std::pair<Sector, int>, RegularizationReport<Real>> classes;
  double quadrature_rel = 0.0;

  Real beta() const {
    Real s(0);
    for (const auto& [k, r] : classes) s += r.beta;
    return s;
  }
  Real epsilon() const {
    Real s(0);
    for (const auto& [k, r] : classes) s += r.epsilon_bound;
    return s;
  }
  Real beta(Sector sec) const {
    Real s(0);
    for (const auto& [k, r] : classes)
      if (k.first == sec) s += r.beta;
    return s;
  }
  Real epsilon(Sector sec) const {
    Real s(0);
    for (const auto& [k, r] : classes)
      if (k.first == sec) s += r.epsilon_bound;
    return s;
  }
};

/// Regularized sum over l of f_stress_enz at z0 = 0 (hbar = c = eps0 = 1).
/// Even and odd l are regularized as separate families.
template <class Real = long double>
StressReport<Real> enz_stress(const std::vector<Sector>& sectors, const GuideGeometry& g,
                              EMConfig<Real> config = enz_stress_config<Real>(),
                              const ModelSpec& spec = enz_stress_model(), double quadrature_rel = 1e-12) {
  StressReport<Real> out;
  out.quadrature_rel = quadrature_rel;
  config.tolerances.quadrature_rel = quadrature_rel;
  if (config.n0 < 1) config.n0 = 1;
  for (Sector s : sectors) {
    for (int parity : {0, 1}) {
      auto f = stress_enz_family<Real>(s, parity, g, Real(quadrature_rel));
      out.classes[{s, parity}] = extract_beta(f, config, spec);
    }
  }
  return out;
}

}  // namespace emreg
