#pragma once

#include "emreg/error.hpp"
#include "emreg/real.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace emreg {

/// Exact rational p/q in lowest terms with q > 0.
struct RationalConstant {
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;

  constexpr RationalConstant() = default;
  constexpr RationalConstant(std::int64_t p, std::int64_t q) : numerator(p), denominator(q) {
    if (denominator < 0) {
      numerator = -numerator;
      denominator = -denominator;
    }
    const std::int64_t g = std::gcd(numerator, denominator);
    if (g > 1) {
      numerator /= g;
      denominator /= g;
    }
  }

  template <class Real>
  Real as() const {
    return Real(numerator) / Real(denominator);
  }
  double value() const { return as<double>(); }

  friend constexpr bool operator==(const RationalConstant&, const RationalConstant&) = default;
};

namespace detail {

// B_0 .. B_30 at even indices, B_1 = -1/2.
inline constexpr std::array<RationalConstant, 16> kEvenBernoulli = {{
    {1, 1},
    {1, 6},
    {-1, 30},
    {1, 42},
    {-1, 30},
    {5, 66},
    {-691, 2730},
    {7, 6},
    {-3617, 510},
    {43867, 798},
    {-174611, 330},
    {854513, 138},
    {-236364091, 2730},
    {8553103, 6},
    {-23749461029, 870},
    {8615841276005, 14322},
}};

inline constexpr int kMaxBernoulliIndex = 30;

}  // namespace detail

/// Exact Bernoulli number B_r for 0 <= r <= 30 (B_1 = -1/2).
inline RationalConstant bernoulli_number(int r) {
  if (r < 0) throw DomainError("Bernoulli index must be non-negative");
  if (r > detail::kMaxBernoulliIndex)
    throw UnsupportedOrder("Bernoulli number B_" + std::to_string(r) + " beyond the B_30 table");
  if (r == 1) return {-1, 2};
  if (r % 2 == 1) return {0, 1};
  return detail::kEvenBernoulli[static_cast<std::size_t>(r / 2)];
}

/// Periodic Bernoulli function P_k(x) = B_k(x - floor(x)).
template <class Real>
Real periodic_bernoulli(int k, Real x) {
  using std::floor;
  if (k < 1) throw DomainError("periodic Bernoulli order must be >= 1");
  if (k > detail::kMaxBernoulliIndex) throw UnsupportedOrder("periodic Bernoulli order above 30");
  const Real t = x - floor(x);
  // Horner on B_k(t) = sum_j C(k, j) B_j t^(k-j).
  Real acc(0);
  Real binom(1);
  std::vector<Real> coeff(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) {
    coeff[static_cast<std::size_t>(j)] = binom * bernoulli_number(j).template as<Real>();
    binom = binom * Real(k - j) / Real(j + 1);
  }
  for (int j = 0; j <= k; ++j) acc = acc * t + coeff[static_cast<std::size_t>(j)];
  return acc;
}

/// Riemann zeta at integer k >= 2.
///
/// Even k uses the Bernoulli closed form; odd k sums 16 terms directly and
/// closes the tail with an Euler-Maclaurin correction of order 12.
template <class Real>
Real riemann_zeta(int k) {
  using std::pow;
  if (k < 2) throw DomainError("zeta(k) requires k >= 2");
  if (k % 2 == 0 && k <= detail::kMaxBernoulliIndex) {
    const Real two_pi = Real(2) * pi<Real>();
    Real fact(1);
    for (int i = 2; i <= k; ++i) fact *= Real(i);
    const Real b = bernoulli_number(k).template as<Real>();
    const Real sign = (k / 2) % 2 == 1 ? Real(1) : Real(-1);
    return sign * b * pow(two_pi, k) / (Real(2) * fact);
  }
  constexpr int kTerms = 16;
  Real sum(0);
  for (int j = kTerms - 1; j >= 1; --j) sum += pow(Real(j), -k);
  const Real n(kTerms);
  sum += pow(n, 1 - k) / Real(k - 1) + pow(n, -k) / Real(2);
  // sum_r B_2r/(2r)! * k(k+1)...(k+2r-2) * N^(-k-2r+1)
  Real rising(k);
  Real fact(2);
  for (int r = 1; r <= 6; ++r) {
    const Real b = bernoulli_number(2 * r).template as<Real>();
    sum += b / fact * rising * pow(n, -k - 2 * r + 1);
    rising *= Real(k + 2 * r - 1) * Real(k + 2 * r);
    fact *= Real(2 * r + 1) * Real(2 * r + 2);
  }
  return sum;
}

/// Series in sigma whose terms are c * sigma^p * ln(sigma)^q with q in {0, 1}.
template <class Real>
struct LogPowerSeries {
  struct Term {
    Real coefficient;
    int power;
    int log_power;
  };
  std::vector<Term> terms;

  Real operator()(Real sigma) const {
    using std::log;
    using std::pow;
    const Real ls = log(sigma);
    Real s(0);
    for (const auto& t : terms) {
      Real v = t.coefficient * pow(sigma, t.power);
      if (t.log_power == 1) v *= ls;
      s += v;
    }
    return s;
  }

  LogPowerSeries derivative() const {
    LogPowerSeries d;
    for (const auto& t : terms) {
      if (t.power != 0) d.terms.push_back({t.coefficient * Real(t.power), t.power - 1, t.log_power});
      if (t.log_power == 1) d.terms.push_back({t.coefficient, t.power - 1, 0});
    }
    return d;
  }

  LogPowerSeries shifted(int dp) const {
    LogPowerSeries r = *this;
    for (auto& t : r.terms) t.power += dp;
    return r;
  }
};

/// Ascending series of K(sigma) = Y1(sigma/2) - H1(sigma/2), truncated after
/// `order` terms of each Bessel/Struve sum.
///
/// Test oracle only: valid for 0 < sigma <= 0.1.
template <class Real>
LogPowerSeries<Real> k_function_series_terms(int order) {
  using std::log;
  if (order < 1 || order > 8) throw UnsupportedOrder("K series order must be in [1, 8]");
  const Real p = pi<Real>();
  const Real g = euler_gamma<Real>();
  const Real ln4 = log(Real(4));
  LogPowerSeries<Real> s;
  // Y1: -2/(pi x) with x = sigma/2.
  s.terms.push_back({Real(-4) / p, -1, 0});
  Real kfact(1);  // k!
  Real harmonic(0);
  Real struve_den = boost::math::tgamma(Real(3) / Real(2)) * boost::math::tgamma(Real(5) / Real(2));
  for (int k = 0; k < order; ++k) {
    if (k > 0) {
      kfact *= Real(k);
      harmonic += Real(1) / Real(k);
    }
    const Real kp1fact = kfact * Real(k + 1);
    const Real sign = k % 2 == 0 ? Real(1) : Real(-1);
    const int pw = 2 * k + 1;
    const Real scale = sign / (kfact * kp1fact);
    Real quarter_pow(1);
    for (int i = 0; i < pw; ++i) quarter_pow /= Real(4);
    const Real jk = scale * quarter_pow;  // J1 term coefficient of sigma^pw
    // (2/pi) J1 ln(sigma/4)
    s.terms.push_back({Real(2) / p * jk, pw, 1});
    s.terms.push_back({-Real(2) / p * jk * ln4, pw, 0});
    // -(1/pi) (psi(k+1) + psi(k+2)) ...
    const Real psi_k1 = -g + harmonic;
    const Real psi_k2 = psi_k1 + Real(1) / Real(k + 1);
    s.terms.push_back({-(psi_k1 + psi_k2) / p * jk, pw, 0});
    // -H1: -(-1)^k (sigma/4)^(2k+2) / (Gamma(k+3/2) Gamma(k+5/2))
    if (k > 0) struve_den *= (Real(k) + Real(1) / Real(2)) * (Real(k) + Real(3) / Real(2));
    s.terms.push_back({-sign * quarter_pow / Real(4) / struve_den, pw + 1, 0});
  }
  return s;
}

/// d^deriv/dsigma^deriv K(sigma) from the truncated ascending series.
template <class Real>
Real k_function_series(Real sigma, int order, int deriv = 0) {
  if (!(sigma > Real(0)) || sigma > Real(0.1))
    throw RegimeError("K series is only valid for 0 < sigma <= 0.1");
  auto s = k_function_series_terms<Real>(order);
  for (int i = 0; i < deriv; ++i) s = s.derivative();
  return s(sigma);
}

}  // namespace emreg
