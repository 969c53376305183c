#include "emreg/calculus.hpp"
#include "emreg/summands.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace emreg;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST(Integrate, ExponentialOnHalfLine) {
  RealFunction<double> f([](double x) { return std::exp(-x); });
  const auto r = integrate(f, 0.0, kInf, 1e-12);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_GE(r.error_estimate, 0.0);
  EXPECT_GT(r.evaluations, 0);
}

TEST(Integrate, SqrtKernel) {
  const double s = 0.1;
  const double c = s * pi<double>();
  RealFunction<double> f([c](double u) { return std::sqrt(u) * std::exp(-c * std::sqrt(u)); });
  const auto r = integrate(f, 0.0, kInf, 1e-12);
  EXPECT_NEAR(r.value / (4 / (c * c * c)), 1.0, 1e-11);
}

TEST(Integrate, FiniteSqrtKernelAgainstBoost) {
  const double s = 0.01;
  auto g = [s](double u) { return std::sqrt(u) * std::exp(-s * std::sqrt(u)); };
  const auto r = integrate(RealFunction<double>(g), 0.0, 2.0, 1e-12);
  // independent oracle in y = sqrt(u): 2 y^2 e^{-s y}
  const double ref = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [s](double y) { return 2 * y * y * std::exp(-s * y); }, 0.0, std::sqrt(2.0), 10, 1e-14);
  EXPECT_NEAR(r.value, ref, 1e-10 * ref);
  EXPECT_NEAR(r.value, 4 * std::sqrt(2.0) / 3 - 2 * s, 1e-3);
}

TEST(Integrate, RejectsTolerance) {
  RealFunction<double> f([](double x) { return x; });
  EXPECT_THROW(integrate(f, 0.0, 1.0, 0.5), DomainError);
}

TEST(Integrate, Linearity) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a1 = u(rng), a2 = u(rng), w = u(rng), al = u(rng) - 1, be = u(rng) - 1;
    auto f = [=](double x) { return std::exp(-a1 * x) * std::cos(w * x); };
    auto g = [=](double x) { return x * x * std::exp(-a2 * x); };
    const double tol = 1e-10;
    const auto rf = integrate(RealFunction<double>(f), 0.0, kInf, tol);
    const auto rg = integrate(RealFunction<double>(g), 0.0, kInf, tol);
    const auto rh = integrate(RealFunction<double>([&](double x) { return al * f(x) + be * g(x); }), 0.0, kInf, tol);
    const double expect = al * rf.value + be * rg.value;
    const double scale = std::abs(al * rf.value) + std::abs(be * rg.value);
    EXPECT_NEAR(rh.value, expect, 2 * tol * scale);
  }
}

TEST(Integrate, TailTruncation) {
  auto f = [](double x) { return std::sqrt(x) * std::exp(-0.3 * std::sqrt(x)); };
  const auto r = integrate_to_infinity<double>(f, 0.0, 1e-10, 1.0);
  const double t = r.truncation_point;
  ASSERT_GT(t, 0.0);
  const auto extra = integrate_finite<double>(f, t, 2 * t, 1e-10);
  EXPECT_LE(std::abs(extra.value), r.error_estimate + 1e-12 * std::abs(r.value));
}

TEST(Derivative, Polynomial) {
  RealFunction<double> f([](double x) { return x * x * x; });
  EXPECT_NEAR(derivative(f, 2.0, 2), 12.0, 1e-7);
}

TEST(Derivative, Exponential) {
  const double s = 0.5, c = s * pi<double>();
  RealFunction<double> f([c](double x) { return std::exp(-c * x); });
  const double expect = -c * c * c * std::exp(-c);
  EXPECT_NEAR(derivative(f, 1.0, 3) / expect, 1.0, 1e-8);
}

TEST(Derivative, HomogeneousStressSummand) {
  const double s = 0.3, c = s * pi<double>();
  const auto f = stress_hom_family<double>(Sector::TE).at(s);
  // d/dx of 2 x^2 e^{-c x}/(pi s)
  const double x = 2.0;
  const double expect = (4 * x - 2 * c * x * x) * std::exp(-c * x) / (pi<double>() * s);
  EXPECT_NEAR(derivative(f, x, 1) / expect, 1.0, 1e-12);
  RealFunction<double> plain(f.value);
  EXPECT_NEAR(derivative(plain, x, 1) / expect, 1.0, 1e-8);
}

TEST(Derivative, AnalyticAgreesWithFiniteDifferences) {
  const double c = 0.7;
  RealFunction<double> analytic(
      [c](double x) { return std::exp(-c * x) / (1 + x); },
      [c](double x, int k) {
        // Leibniz: sum_j C(k,j) (-c)^{k-j} e^{-cx} (-1)^j j!/(1+x)^{j+1}
        double s = 0, binom = 1, fact = 1;
        for (int j = 0; j <= k; ++j) {
          if (j > 0) {
            binom = binom * (k - j + 1) / j;
            fact *= j;
          }
          s += binom * std::pow(-c, k - j) * (j % 2 ? -1 : 1) * fact / std::pow(1 + x, j + 1);
        }
        return s * std::exp(-c * x);
      },
      8);
  RealFunction<double> plain(analytic.value);
  for (int k = 1; k <= 5; ++k) {
    const double a = derivative(analytic, 1.3, k);
    const double n = derivative(plain, 1.3, k);
    EXPECT_NEAR(n / a, 1.0, 1e-6) << "order " << k;
  }
}

TEST(Derivative, OrderAboveCapability) {
  RealFunction<double> f([](double x) { return std::sin(x); });
  EXPECT_THROW(derivative(f, 0.1, kMaxDerivativeOrder + 1), UnsupportedOrder);
}

TEST(AbsDerivativeIntegral, Exponential) {
  RealFunction<double> f([](double x) { return std::exp(-x); }, [](double x, int k) { return (k % 2 ? -1 : 1) * std::exp(-x); }, 8);
  const double v = abs_derivative_integral(f, 0.0, 3, 1e-10);
  EXPECT_NEAR(v, 1.0, 1e-9);
  EXPECT_GE(v, 1.0 - 1e-12);
}

TEST(AbsDerivativeIntegral, PolynomialBelowOrder) {
  // derivative of order 3 of a quadratic vanishes identically
  RealFunction<double> f([](double x) { return 1 + x * x; }, [](double x, int k) { return k == 1 ? 2 * x : (k == 2 ? 2.0 : 0.0); }, 8);
  EXPECT_EQ(abs_derivative_integral(f, 0.0, 3, 1e-10), 0.0);
}

TEST(AbsDerivativeIntegral, DivergentTail) {
  RealFunction<double> f([](double x) { return x; }, [](double, int k) { return k == 1 ? 1.0 : 0.0; }, 8);
  EXPECT_THROW(abs_derivative_integral(f, 0.0, 1, 1e-8), DivergenceError);
}
