#include "emreg/calculus.hpp"
#include "emreg/special.hpp"
#include "emreg/summands.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace emreg;

namespace {

const double kPi = pi<double>();
const double kInf = std::numeric_limits<double>::infinity();

double ipq(int p, int q, double a, double b, double s) { return i_pq<double>({p, q, a, b, s}, 1e-13).value; }

}  // namespace

TEST(EnergyHom, TMAtZero) {
  for (double s : {0.01, 0.1, 1.0})
    EXPECT_NEAR(f_energy_hom(Sector::TM, s, 0.0) / (4 / (kPi * kPi * kPi * s * s * s)), 1.0, 1e-14);
}

TEST(EnergyHom, TEAtOne) {
  const double s = 0.05, ps = kPi * s;
  const double expect = (4 / (ps * ps) + 4 / ps + 2) * std::exp(-ps) / ps;
  EXPECT_NEAR(f_energy_hom(Sector::TE, s, 1.0) / expect, 1.0, 1e-14);
}

TEST(EnergyHom, MatchesQuadrature) {
  const double s = 0.1;
  auto f = [s](double u) { return std::sqrt(u) * std::exp(-s * kPi * std::sqrt(u)); };
  const double q = integrate<double>(RealFunction<double>(f), 9.0, kInf, 1e-13).value;
  for (Sector sec : {Sector::TE, Sector::TM}) EXPECT_NEAR(f_energy_hom(sec, s, 3.0) / q, 1.0, 1e-10);
}

TEST(EnergyHom, Domain) {
  EXPECT_THROW(f_energy_hom(Sector::TE, 0.1, 0.0), DomainError);
  EXPECT_THROW(f_energy_hom(Sector::TM, 0.0, 1.0), DomainError);
}

TEST(StressHom, Values) {
  EXPECT_EQ(f_stress_hom(Sector::TM, 0.1, 0.0), 0.0);
  const double s = 0.3;
  EXPECT_NEAR(f_stress_hom(Sector::TE, s, 1.0) / (2 * std::exp(-s * kPi) / (kPi * s)), 1.0, 1e-14);
}

TEST(StressHom, MatchesQuadrature) {
  const double s = 0.2;
  auto f = [s](double u) { return 4 / std::sqrt(u) * std::exp(-s * kPi * std::sqrt(u)); };
  const double q = integrate<double>(RealFunction<double>(f), 4.0, kInf, 1e-13).value;
  for (Sector sec : {Sector::TE, Sector::TM}) EXPECT_NEAR(f_stress_hom(sec, s, 2.0) / q, 1.0, 1e-10);
}

TEST(Ipq, SqrtMomentHandOracle) {
  // u = y^2: 2 int y^2 e^{-s y} dy = 4/s^3
  EXPECT_NEAR(ipq(1, 0, 0.0, kInf, 0.1) / 4000.0, 1.0, 1e-12);
  for (double s : {0.02, 0.5, 3.0}) EXPECT_NEAR(ipq(1, 0, 0.0, kInf, s) * s * s * s / 4, 1.0, 1e-12);
}

TEST(Ipq, FiniteRangeSmallSigma) {
  const double s = 0.01;
  EXPECT_NEAR(ipq(1, 0, 0.0, 2.0, s), 4 * std::sqrt(2.0) / 3 - 2 * s, 5 * s * s);
}

TEST(Ipq, MatchesKDerivative) {
  const double s = 0.05;
  const double series = kPi / 4 * k_function_series<double>(s, 8, 1);
  EXPECT_NEAR(series / ipq(1, 1, 0.0, kInf, s), 1.0, 1e-6);
}

TEST(Ipq, Domain) {
  EXPECT_THROW(ipq(1, 0, 0.0, kInf, 0.0), DomainError);
  EXPECT_THROW(ipq(1, 0, 3.0, 2.0, 0.1), DomainError);
}

TEST(EnergyEnz, LowerLimitIdentities) {
  for (double s : {0.05, 0.3}) {
    EXPECT_NEAR(f_energy_enz(Sector::TE, s, 0.0, 1e-13) / (ipq(1, 0, 0.0, kInf, s) - ipq(1, 1, 0.0, kInf, s)), 1.0,
                1e-10);
    EXPECT_NEAR(f_energy_enz(Sector::TM, s, 0.0, 1e-13) / (ipq(1, 0, 2.0, kInf, s) - ipq(1, 1, 2.0, kInf, s)), 1.0,
                1e-10);
    EXPECT_NEAR(f_energy_enz(Sector::TE, s, 1.0, 1e-13) / (ipq(1, 0, 2.0, kInf, s) - 3 * ipq(1, 1, 2.0, kInf, s)),
                1.0, 1e-10);
  }
}

TEST(EnergyEnz, Positive) {
  for (Sector sec : {Sector::TE, Sector::TM})
    for (double s : {0.01, 0.2, 2.0})
      for (double l : {0.0, 0.5, 1.0, 7.0, 40.0}) EXPECT_GT(f_energy_enz(sec, s, l, 1e-12), 0.0);
}

TEST(EnergyEnz, Domain) {
  EXPECT_THROW(f_energy_enz(Sector::TE, 0.0, 1.0), DomainError);
  EXPECT_THROW(f_energy_enz(Sector::TE, 0.1, -1.0), DomainError);
}

TEST(EnergyEnz, LeibnizAgreesWithFiniteDifferences) {
  const quad s(0.1);
  const quad tol(1e-28);
  for (Sector sec : {Sector::TE, Sector::TM}) {
    auto f = [&](quad l) { return f_energy_enz(sec, s, l, tol); };
    for (int l0 : {1, 2, 3}) {
      const auto jet = f_energy_enz_jet(sec, quad(l0), s, 5, 0, tol);
      quad fact(1);
      for (int k = 1; k <= 5; ++k) {
        fact *= k;
        if (k % 2 == 0) continue;
        const quad analytic = jet[k] * fact;
        const quad numeric = finite_difference<quad>(f, quad(l0), k);
        EXPECT_LT(to_double(abs(numeric / analytic - 1)), 1e-6) << to_string(sec) << " l = " << l0 << " order " << k;
      }
    }
  }
}

TEST(EnergyEnz, FamilyTailMatchesQuadrature) {
  const auto fam = energy_enz_family<double>(Sector::TM, 1e-12);
  const double s = 0.5;
  auto inner = [&](double l) { return fam.value(l, s); };
  const double direct = integrate_to_infinity<double>(inner, 2.0, 1e-10, 4.0).value;
  EXPECT_NEAR(fam.tail(2.0, s) / direct, 1.0, 1e-8);
}

TEST(EnergyHom, ContinuumLimit) {
  // sum over the transverse lattice per unit area against (pi^2/4) F(nz)
  const double L = 200, s = 0.2;
  const GuideGeometry g{L, L, 1, 1};
  for (int nz : {1, 2}) {
    double sum = 0;
    const int nmax = static_cast<int>(L * 40 / (kPi * s));
    for (int nx = 0; nx <= nmax; ++nx)
      for (int ny = 0; ny <= nmax; ++ny) {
        const double w = (nx == 0 ? 0.5 : 1.0) * (ny == 0 ? 0.5 : 1.0);
        const double om = cuboid_omega(nx, ny, nz, g);
        sum += w * om * std::exp(-s * om);
      }
    const double continuum = kPi * kPi / 4 * f_energy_hom(Sector::TE, s, double(nz));
    EXPECT_NEAR(sum / (L * L) / continuum, 1.0, 0.01) << "nz = " << nz;
  }
}

TEST(StressIntegrand, GroundBracket) {
  const auto m = mode_function<double>(0, 1.0);
  EXPECT_NEAR(stress_bracket(Sector::TE, m, 0.0), 1.0, 1e-14);
}

TEST(StressIntegrand, OddModeAtCentre) {
  const GuideGeometry g;
  const auto m = mode_function<double>(1, 1.0);
  EXPECT_NEAR(m.eval(0.0).value, 0.0, 1e-15);
  EXPECT_GT(stress_bracket(Sector::TE, m, 0.0), 0.0);
  EXPECT_GT(stress_integrand_enz(Sector::TE, 1, 0.0, 1.0, g), 0.0);
}

TEST(StressIntegrand, EvanescentDecay) {
  const GuideGeometry g;
  for (Sector sec : {Sector::TE, Sector::TM}) {
    double prev = std::abs(stress_integrand_enz(sec, 0, 2.0, 0.8, g));
    for (double z : {5.0, 10.0, 20.0}) {
      const double v = std::abs(stress_integrand_enz(sec, 0, z, 0.8, g));
      EXPECT_LT(v, prev);
      prev = v;
    }
    EXPECT_LT(prev, 1e-10);
  }
}

TEST(StressIntegrand, GaugeModeExcluded) {
  EXPECT_THROW(stress_integrand_enz(Sector::TE, 0, 0.0, 0.0, GuideGeometry{}), ExcludedMode);
}

TEST(StressEnz, DecaysInSigma) {
  const GuideGeometry g;
  for (Sector sec : {Sector::TE, Sector::TM}) {
    double prev = f_stress_enz(sec, 0.25, 0, 0.0, g);
    for (double s : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const double v = f_stress_enz(sec, s, 0, 0.0, g);
      EXPECT_LT(v, prev);
      EXPECT_GT(v, 0.0);
      prev = v;
    }
    EXPECT_LT(prev, 1e-3);
  }
}

TEST(StressEnz, ParityInZ0) {
  const GuideGeometry g{1, 1, 1.3, 1};
  for (Sector sec : {Sector::TE, Sector::TM})
    for (int l : {0, 1}) {
      const double p = f_stress_enz(sec, 0.5, l, 0.7 * g.a, g, 1e-11);
      const double m = f_stress_enz(sec, 0.5, l, -0.7 * g.a, g, 1e-11);
      EXPECT_NEAR(p, m, 1e-9 * std::abs(p)) << to_string(sec) << " l = " << l;
    }
}

TEST(StressEnz, ReproducibleAcrossTolerances) {
  const GuideGeometry g;
  const double coarse = f_stress_enz(Sector::TE, 0.5, 0, 0.0, g, 1e-8);
  const double fine = f_stress_enz(Sector::TE, 0.5, 0, 0.0, g, 1e-11);
  EXPECT_GT(fine, 0.0);
  EXPECT_TRUE(std::isfinite(fine));
  EXPECT_NEAR(coarse / fine, 1.0, 1e-8);
}

TEST(StressEnz, FamilyMatchesDirectAtIntegerIndex) {
  const GuideGeometry g;
  for (Sector sec : {Sector::TE, Sector::TM})
    for (int parity : {0, 1}) {
      const auto fam = stress_enz_family<long double>(sec, parity, g, 1e-13L);
      for (int j : {0, 2}) {
        const int l = 2 * j + parity;
        const double direct = f_stress_enz(sec, 0.5, l, 0.0, g, 1e-11);
        const double viafam = static_cast<double>(fam.value(j, 0.5L));
        EXPECT_NEAR(viafam / direct, 1.0, 1e-8) << to_string(sec) << " l = " << l;
      }
    }
}
