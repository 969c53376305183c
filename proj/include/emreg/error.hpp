#pragma once

#include <stdexcept>
#include <string>

namespace emreg {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested order or table entry beyond what is implemented.
class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

/// A series oracle was asked for an argument outside its validity regime.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of budget; carries the best estimate.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double best, double err)
      : Error(what), best_estimate(best), error_estimate(err) {}
  double best_estimate;
  double error_estimate;
};

/// An absolutely integrated derivative failed to decay.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Boundary corrections blow up at the requested start index.
class SingularStart : public Error {
 public:
  SingularStart(const std::string& what, int suggested)
      : Error(what), suggested_n0(suggested) {}
  int suggested_n0;
};

/// Least-squares design matrix is numerically rank deficient.
class IllConditionedFit : public Error {
 public:
  IllConditionedFit(const std::string& what, double cond)
      : Error(what), condition(cond) {}
  double condition;
};

/// No (m, N) plateau found in a model scan.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

/// Gauge-trivial mode passed where a physical mode is required.
class ExcludedMode : public Error {
 public:
  using Error::Error;
};

/// Enumeration exceeded its work budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace emreg
