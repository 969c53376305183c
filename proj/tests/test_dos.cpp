#include "emreg/calculus.hpp"
#include "emreg/dos.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace emreg;

namespace {

const double kPi = pi<double>();

// (L / pi a)^2 (pi/2) int_0^u0 u l(u) du: quarter-disc measure times the l extent
double volume_by_quadrature(Sector s, double omega, double L) {
  if (s == Sector::TM && omega * omega <= 2) return 0.0;
  const double u0 = isospectral_root(s, omega);
  auto f = [&](double u) { return u * isospectral_l(s, omega, u); };
  const double q = integrate_finite<double>(f, 0.0, u0, 1e-13).value;
  return (L / kPi) * (L / kPi) * kPi / 2 * q;
}

// the l = 0 layer counts fully while the volume weighs it by half
double half_layer(Sector s, double omega, double L) {
  const double u0 = isospectral_root(s, omega);
  return 0.5 * (L / kPi) * (L / kPi) * kPi / 4 * u0 * u0;
}

}  // namespace

TEST(Count, ZeroCutoff) {
  for (Sector s : {Sector::TE, Sector::TM}) {
    EXPECT_EQ(count_modes_brute(s, 0.0, 100, 1), 0);
    EXPECT_EQ(dos_volume_analytic(s, 0.0, 100, 1), 0.0);
  }
}

TEST(Count, TMSpectralFloor) {
  EXPECT_EQ(count_modes_brute(Sector::TM, 1.4, 100, 1), 0);
  // q = sqrt(theta) -> 1 from above, so the l = 0 floor is Omega^2 = q (q + 1) -> 2
  EXPECT_EQ(count_modes_brute(Sector::TM, 1.414, 100, 1), 0);
  EXPECT_GT(count_modes_brute(Sector::TM, 1.43, 100, 1), 0);
}

TEST(Count, MatchesDirectEnumeration) {
  // small box walked without the l range shortcut
  const double L = 7, a = 1, w = 6;
  const GuideGeometry g{L, L, a, 1};
  for (Sector s : {Sector::TE, Sector::TM}) {
    long n = 0;
    const int lo = s == Sector::TM ? 1 : 0;
    for (int nx = lo; nx < 40; ++nx)
      for (int ny = lo; ny < 40; ++ny) {
        if (nx == 0 && ny == 0) continue;
        const double th = theta(s, nx, ny, g);
        for (int l = 0; l < 40; ++l)
          if (omega_enz<double>(l, th) <= w) ++n;
      }
    EXPECT_EQ(count_modes_brute(s, w, L, a), n) << to_string(s);
  }
}

TEST(Count, MonotoneInOmega) {
  for (Sector s : {Sector::TE, Sector::TM}) {
    long prev = 0;
    for (double w = 0; w <= 12; w += 0.25) {
      const long c = count_modes_brute(s, w, 60, 1);
      EXPECT_GE(c, prev);
      prev = c;
    }
  }
}

TEST(Count, Budget) { EXPECT_THROW(count_modes_brute(Sector::TE, 1e4, 1e4, 1, 1000), BudgetError); }

TEST(Count, Domain) {
  EXPECT_THROW(count_modes_brute(Sector::TE, -1, 100, 1), DomainError);
  EXPECT_THROW(dos_volume_analytic(Sector::TE, 1, 100, 0), DomainError);
}

TEST(Count, VolumePlusHalfLayer) {
  for (double L : {50.0, 100.0, 200.0})
    for (Sector s : {Sector::TE, Sector::TM}) {
      const double v = dos_volume_analytic(s, 10, L, 1) + half_layer(s, 10, L);
      EXPECT_LT(std::abs(count_modes_brute(s, 10, L, 1) / v - 1), 10 / L) << to_string(s) << " L = " << L;
    }
}

TEST(Count, HalfLayerShrinksWithOmega) {
  for (Sector s : {Sector::TE, Sector::TM}) {
    double prev = 1;
    for (double w : {5.0, 10.0, 20.0, 40.0}) {
      const double r = count_modes_brute(s, w, 100, 1) / dos_volume_analytic(s, w, 100, 1) - 1;
      EXPECT_GT(r, 0.0);
      EXPECT_LT(r, prev);
      prev = r;
    }
  }
}

TEST(Volume, TEAtTwo) {
  const double L = 100, xi = std::sqrt(17.0);
  EXPECT_NEAR(dos_volume_analytic(Sector::TE, 2, L, 1) / ((xi - 1) * (xi - 1) * (xi - 1) * L * L / (96 * kPi)), 1.0,
              1e-14);
}

TEST(Volume, MatchesQuadrature) {
  for (Sector s : {Sector::TE, Sector::TM})
    for (double w : {1.0, 1.5, 3.0, 10.0, 50.0}) {
      const double q = volume_by_quadrature(s, w, 80);
      const double v = dos_volume_analytic(s, w, 80, 1);
      if (q == 0.0)
        EXPECT_EQ(v, 0.0);
      else
        EXPECT_NEAR(v / q, 1.0, 1e-10) << to_string(s) << " omega = " << w;
    }
}

TEST(Volume, ScalesWithArea) {
  EXPECT_NEAR(dos_volume_analytic(Sector::TM, 7, 200, 2) / dos_volume_analytic(Sector::TM, 7, 100, 1), 1.0, 1e-14);
}

TEST(Volume, AsymptoticRemainderIsLinear) {
  for (Sector s : {Sector::TE, Sector::TM}) {
    double prev = 0;
    for (double w : {1e2, 1e3, 1e4}) {
      const double r = (dos_volume_analytic(s, w, 1, 1) - dos_volume_asymptotic(w, 1, 1)) / w;
      EXPECT_LT(std::abs(r), 1.0) << to_string(s);
      if (prev != 0) EXPECT_NEAR(r / prev, 1.0, 5e-2);
      prev = r;
    }
  }
}

TEST(Volume, SectorsDifferAtLinearOrder) {
  double prev = 0;
  for (double w : {1e2, 1e3, 1e4}) {
    const double d = (dos_volume_analytic(Sector::TE, w, 1, 1) - dos_volume_analytic(Sector::TM, w, 1, 1)) / w;
    EXPECT_GT(std::abs(d), 1e-3);
    if (prev != 0) EXPECT_NEAR(d / prev, 1.0, 5e-2);
    prev = d;
  }
}

TEST(Isospectral, RootsAreZeros) {
  for (Sector s : {Sector::TE, Sector::TM})
    for (double w : {2.0, 5.0, 30.0}) {
      const double u0 = isospectral_root(s, w);
      EXPECT_GT(u0, 0.0);
      EXPECT_NEAR(isospectral_l(s, w, u0), 0.0, 1e-12 * w);
      EXPECT_GT(isospectral_l(s, w, 0.9 * u0), 0.0);
    }
}

TEST(Isospectral, TMBelowThreshold) { EXPECT_THROW(isospectral_root(Sector::TM, 1.0), DomainError); }

TEST(EnergyGrowth, AgreesWithSingularPart) {
  const auto e = energy_growth_leading(0.01, 12.0);
  EXPECT_NEAR(e.singular_estimate / 1.5e8, 1.0, 1e-12);
  EXPECT_NEAR(e.dos_estimate / 1.5e8, 1.0, 5e-3);
  EXPECT_LT(e.relative_gap, 5e-3);
}

TEST(EnergyGrowth, GapClosesAsSigmaShrinks) {
  double prev = 1;
  for (double s : {0.05, 0.01, 0.002}) {
    const double g = energy_growth_leading(s, 12.0).relative_gap;
    EXPECT_LT(g, prev);
    prev = g;
  }
}
