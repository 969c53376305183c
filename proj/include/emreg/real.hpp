#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>

#include <cmath>
#include <limits>

namespace emreg {

/// 113-bit binary floating point. The sampled Γ(σ) values reach 1e18 while
/// the constant term sits near 1e-3, so extraction needs ~30 digits.
using quad = boost::multiprecision::float128;

template <class Real>
inline Real pi() {
  return boost::math::constants::pi<Real>();
}

template <class Real>
inline Real euler_gamma() {
  return boost::math::constants::euler<Real>();
}

template <class Real>
inline Real epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

template <class Real>
inline double to_double(const Real& x) {
  return static_cast<double>(x);
}

}  // namespace emreg
