#pragma once

#include "emreg/em.hpp"
#include "emreg/error.hpp"
#include "emreg/real.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace emreg {

/// One column of the fit: ln(sigma)^log_power * sigma^(numerator/denominator).
struct BasisTerm {
  int log_power = 0;
  int numerator = 0;
  int denominator = 1;

  bool is_constant() const { return log_power == 0 && numerator == 0; }
  bool is_singular() const { return numerator < 0 || (numerator == 0 && log_power > 0); }
  friend bool operator==(const BasisTerm&, const BasisTerm&) = default;
};

/// How Gamma(sigma) is modelled near sigma = 0.
struct ModelSpec {
  enum class Kind { Reduced, General, Extended };
  Kind kind = Kind::Extended;
  // Reduced / Extended: inverse powers 1..nmax (in units of 1/denominator).
  int nmax = 4;
  // Extended: positive powers 1..positive; even ones also carry a log.
  int positive = 3;
  int denominator = 1;
  // General: j in [-j1, j2], k in [-k1, k2].
  int j1 = 0, j2 = 1, k1 = 4, k2 = 0;
  // Use a closed-form series for Gamma when the family provides one.
  bool prefer_analytic = true;

  static ModelSpec reduced(int n) {
    ModelSpec s;
    s.kind = Kind::Reduced;
    s.nmax = n;
    return s;
  }
  static ModelSpec extended(int n, int positive = 3, int denominator = 1) {
    ModelSpec s;
    s.kind = Kind::Extended;
    s.nmax = n;
    s.positive = positive;
    s.denominator = denominator;
    return s;
  }
  static ModelSpec general(int j1, int j2, int k1, int k2) {
    ModelSpec s;
    s.kind = Kind::General;
    s.j1 = j1;
    s.j2 = j2;
    s.k1 = k1;
    s.k2 = k2;
    return s;
  }

  std::vector<BasisTerm> basis() const {
    std::vector<BasisTerm> b;
    switch (kind) {
      case Kind::Reduced:
        b.push_back({1, 0, 1});
        for (int j = 0; j <= nmax; ++j) b.push_back({0, -j, 1});
        break;
      case Kind::Extended:
        b.push_back({1, 0, denominator});
        for (int j = 0; j <= nmax; ++j) b.push_back({0, -j, denominator});
        for (int j = 1; j <= positive; ++j) {
          b.push_back({0, j, denominator});
          if (j % (2 * denominator) == 0) b.push_back({1, j, denominator});
        }
        break;
      case Kind::General:
        for (int j = -j1; j <= j2; ++j)
          for (int k = -k1; k <= k2; ++k) b.push_back({j, k, 1});
        break;
    }
    return b;
  }

  std::string describe() const {
    switch (kind) {
      case Kind::Reduced:
        return "reduced(N=" + std::to_string(nmax) + ")";
      case Kind::Extended:
        return "extended(N=" + std::to_string(nmax) + ",K=" + std::to_string(positive) +
               ",q=" + std::to_string(denominator) + ")";
      case Kind::General:
        return "general(J=[" + std::to_string(-j1) + "," + std::to_string(j2) + "],K=[" +
               std::to_string(-k1) + "," + std::to_string(k2) + "])";
    }
    return "";
  }
};

template <class Real>
Real basis_value(const BasisTerm& t, Real sigma) {
  using std::log;
  using std::pow;
  Real v = t.numerator == 0 ? Real(1)
                            : (t.denominator == 1 ? pow(sigma, t.numerator)
                                                  : pow(sigma, Real(t.numerator) / Real(t.denominator)));
  if (t.log_power != 0) v *= pow(log(sigma), t.log_power);
  return v;
}

/// Fitted ln(sigma)^j sigma^k model.
template <class Real>
struct LaurentLogModel {
  ModelSpec spec;
  std::vector<BasisTerm> basis;
  std::vector<Real> coefficients;
  Real residual_norm = Real(0);
  double condition = 0.0;
  int samples = 0;

  Real coefficient(int log_power, int numerator, int denominator = 1) const {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const auto& b = basis[i];
      // compare as rationals
      if (b.log_power == log_power && b.numerator * denominator == numerator * b.denominator)
        return coefficients[i];
    }
    return Real(0);
  }
  Real constant() const { return coefficient(0, 0); }

  Real operator()(Real sigma) const {
    Real s(0);
    for (std::size_t i = 0; i < basis.size(); ++i) s += coefficients[i] * basis_value(basis[i], sigma);
    return s;
  }
};

namespace detail {

template <class Real>
struct HouseholderQR {
  std::vector<std::vector<Real>> r;  // rows x n, upper triangle holds R
  std::vector<std::vector<Real>> v;  // reflectors
  std::vector<Real> vnorm2;
  std::size_t n = 0;

  std::vector<Real> solve(std::vector<Real> y) const {
    const std::size_t rows = y.size();
    for (std::size_t k = 0; k < n; ++k) {
      if (vnorm2[k] == Real(0)) continue;
      Real d(0);
      for (std::size_t i = k; i < rows; ++i) d += v[k][i - k] * y[i];
      d = Real(2) * d / vnorm2[k];
      for (std::size_t i = k; i < rows; ++i) y[i] -= d * v[k][i - k];
    }
    std::vector<Real> c(n);
    for (std::size_t k = n; k-- > 0;) {
      Real s = y[k];
      for (std::size_t j = k + 1; j < n; ++j) s -= r[k][j] * c[j];
      c[k] = s / r[k][k];
    }
    return c;
  }
};

template <class Real>
HouseholderQR<Real> householder(std::vector<std::vector<Real>> a, std::size_t n) {
  using std::sqrt;
  const std::size_t rows = a.size();
  HouseholderQR<Real> qr;
  qr.n = n;
  qr.v.resize(n);
  qr.vnorm2.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    Real norm(0);
    for (std::size_t i = k; i < rows; ++i) norm += a[i][k] * a[i][k];
    norm = sqrt(norm);
    if (norm == Real(0)) throw IllConditionedFit("rank-deficient design matrix", 1e300);
    const Real alpha = a[k][k] > Real(0) ? -norm : norm;
    auto& v = qr.v[k];
    v.resize(rows - k);
    for (std::size_t i = k; i < rows; ++i) v[i - k] = a[i][k];
    v[0] -= alpha;
    Real vn(0);
    for (const auto& x : v) vn += x * x;
    qr.vnorm2[k] = vn;
    if (vn == Real(0)) continue;
    for (std::size_t j = k; j < n; ++j) {
      Real d(0);
      for (std::size_t i = k; i < rows; ++i) d += v[i - k] * a[i][j];
      d = Real(2) * d / vn;
      for (std::size_t i = k; i < rows; ++i) a[i][j] -= d * v[i - k];
    }
  }
  qr.r = std::move(a);
  return qr;
}

}  // namespace detail

/// Least squares by Householder QR after scaling each column to unit
/// max-magnitude.
template <class Real>
LaurentLogModel<Real> fit_laurent_log(const std::vector<std::pair<Real, Real>>& samples,
                                      const ModelSpec& spec) {
  using std::abs;
  using std::sqrt;
  LaurentLogModel<Real> model;
  model.spec = spec;
  model.basis = spec.basis();
  const std::size_t n = model.basis.size();
  const std::size_t rows = samples.size();
  if (rows < 2 * n) throw DomainError("fit needs at least twice as many samples as coefficients");
  for (std::size_t i = 0; i < rows; ++i) {
    if (!(samples[i].first > Real(0))) throw DomainError("sample sigma must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (samples[j].first == samples[i].first) throw DomainError("sample sigma values must be distinct");
  }
  std::vector<std::vector<Real>> a(rows, std::vector<Real>(n));
  std::vector<Real> y(rows);
  std::vector<Real> scale(n, Real(0));
  for (std::size_t i = 0; i < rows; ++i) {
    y[i] = samples[i].second;
    for (std::size_t j = 0; j < n; ++j) {
      a[i][j] = basis_value(model.basis[j], samples[i].first);
      scale[j] = std::max(scale[j], abs(a[i][j]));
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (scale[j] == Real(0)) throw IllConditionedFit("zero column in design matrix", 1e300);
    for (std::size_t i = 0; i < rows; ++i) a[i][j] /= scale[j];
  }
  // Householder QR; reflectors are kept so the solve can be refined.
  const auto qr = detail::householder(a, n);
  Real rmax(0);
  Real rmin = std::numeric_limits<Real>::max();
  for (std::size_t k = 0; k < n; ++k) {
    rmax = std::max(rmax, abs(qr.r[k][k]));
    rmin = std::min(rmin, abs(qr.r[k][k]));
  }
  const double cond = rmin > Real(0) ? to_double(rmax / rmin) : 1e300;
  model.condition = cond;
  if (!(rmin > rmax * epsilon<Real>() * Real(static_cast<int>(rows))))
    throw IllConditionedFit("design matrix is numerically rank deficient", cond);
  std::vector<Real> c = qr.solve(y);
  // Gamma spans many decades across the grid; refinement brings the error
  // down to the size of each sample rather than of the largest one.
  for (int pass = 0; pass < 3; ++pass) {
    std::vector<Real> r(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      Real s = y[i];
      for (std::size_t k = 0; k < n; ++k) s -= a[i][k] * c[k];
      r[i] = s;
    }
    const auto dc = qr.solve(r);
    for (std::size_t k = 0; k < n; ++k) c[k] += dc[k];
  }
  Real res(0);
  for (std::size_t i = 0; i < rows; ++i) {
    Real s = y[i];
    for (std::size_t k = 0; k < n; ++k) s -= a[i][k] * c[k];
    res += s * s;
  }
  for (std::size_t k = 0; k < n; ++k) c[k] /= scale[k];
  model.coefficients = std::move(c);
  model.residual_norm = sqrt(res);
  model.samples = static_cast<int>(rows);
  return model;
}

/// Output of a regularization: beta with its remainder bound.
template <class Real>
struct RegularizationReport {
  Real beta = Real(0);
  // (j, k) -> coefficient of ln(sigma)^j sigma^(-k); singular entries only
  std::map<std::pair<int, int>, Real> singular_coefficients;
  Real epsilon_bound = Real(0);
  EMConfig<Real> config;
  std::string method;  // "analytic" or "fit"
  std::string model;
  Real residual_norm = Real(0);
  double condition = 0.0;
  std::vector<std::pair<Real, Real>> samples;
  // full fitted model, empty on the analytic path
  std::vector<BasisTerm> basis;
  std::vector<Real> coefficients;

  Real fitted(Real sigma) const {
    Real s(0);
    for (std::size_t i = 0; i < basis.size(); ++i) s += coefficients[i] * basis_value(basis[i], sigma);
    return s;
  }
};

namespace detail {

template <class F>
void parallel_for(std::size_t count, const F& body) {
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

/// Gamma-hat^{n,n0}_m sampled on a grid for several m at once.
///
/// The prefix, f(n0)/2 and the tail do not depend on m, and one jet of the
/// highest order serves every S_m, so a sweep costs little more than one m.
template <class Real>
std::map<int, std::vector<Real>> sample_gamma(const SummandFamily<Real>& f, int n, int n0,
                                              const std::vector<int>& ms,
                                              const std::vector<Real>& grid,
                                              Real rel_tol = default_quadrature_tol<Real>()) {
  if (ms.empty()) throw DomainError("no m values requested");
  const int mmax = *std::max_element(ms.begin(), ms.end());
  std::map<int, std::vector<Real>> out;
  for (int m : ms) out[m].resize(grid.size());
  // Surface singular starts before spawning work.
  (void)s_correction(f, n0, 1, grid.back());
  detail::parallel_for(grid.size(), [&](std::size_t i) {
    const Real sigma = grid[i];
    Real base(0);
    for (int k = n; k < n0; ++k) base += f.value(Real(k), sigma);
    if (!f.jet) {
      base += f.value(Real(n0), sigma) / Real(2) + tail_integral(f, n0, sigma, rel_tol);
      for (int m : ms) out[m][i] = base - s_correction(f, n0, m, sigma);
      return;
    }
    Jet<Real> j;
    try {
      j = f.jet(Real(n0), sigma, 2 * mmax - 1, 0);
    } catch (const DomainError& e) {
      throw SingularStart(e.what(), n0 + 1);
    }
    base += j[0] / Real(2) + tail_integral(f, n0, sigma, rel_tol);
    Real s(0);
    for (int r = 1; r <= mmax; ++r) {
      s += bernoulli_number(2 * r).template as<Real>() * j[2 * r - 1] / Real(2 * r);
      if (out.count(r)) out[r][i] = base - s;
    }
  });
  return out;
}

template <class Real>
int resolve_n0(const SummandFamily<Real>& f, const EMConfig<Real>& config) {
  if (config.n0 >= config.n) return config.n0;
  return select_n0(f, config.n, config.m, config.sigma_grid);
}

template <class Real>
RegularizationReport<Real> report_from_model(const LaurentLogModel<Real>& model) {
  RegularizationReport<Real> r;
  r.beta = model.constant();
  for (std::size_t i = 0; i < model.basis.size(); ++i) {
    const auto& b = model.basis[i];
    if (b.is_singular() && b.denominator == 1) r.singular_coefficients[{b.log_power, -b.numerator}] = model.coefficients[i];
  }
  r.method = "fit";
  r.model = model.spec.describe();
  r.residual_norm = model.residual_norm;
  r.condition = model.condition;
  r.basis = model.basis;
  r.coefficients = model.coefficients;
  return r;
}

/// beta = constant term of Gamma (or Gamma-hat) as sigma -> 0+, with the
/// remainder bound evaluated at the smallest grid sigma.
template <class Real>
RegularizationReport<Real> extract_beta(const SummandFamily<Real>& f, EMConfig<Real> config,
                                        const ModelSpec& spec = {}) {
  config.validate();
  if (config.sigma_grid.empty()) throw DomainError("empty sigma grid");
  const int n0 = resolve_n0(f, config);
  config.n0 = n0;
  RegularizationReport<Real> r;
  if (spec.prefer_analytic && f.series) {
    r.beta = f.series(config.n, n0, config.m, 0);
    for (int k = 1; k <= 8; ++k) {
      const Real c = f.series(config.n, n0, config.m, -k);
      if (c != Real(0)) r.singular_coefficients[{0, k}] = c;
    }
    r.method = "analytic";
    r.model = "closed-form series";
  } else {
    auto g = sample_gamma(f, config.n, n0, {config.m}, config.sigma_grid,
                          Real(config.tolerances.quadrature_rel) > default_quadrature_tol<Real>()
                              ? Real(config.tolerances.quadrature_rel)
                              : default_quadrature_tol<Real>());
    std::vector<std::pair<Real, Real>> samples;
    for (std::size_t i = 0; i < config.sigma_grid.size(); ++i)
      samples.emplace_back(config.sigma_grid[i], g[config.m][i]);
    auto model = fit_laurent_log(samples, spec);
    r = report_from_model(model);
    r.samples = std::move(samples);
  }
  r.epsilon_bound = tail_bound_epsilon(f, n0, config.m, config.sigma_grid.front(),
                                       Real(config.tolerances.epsilon_rel));
  r.config = config;
  return r;
}

struct ScanRow {
  int m;
  int nmax;
  double c0;
  double epsilon;
};

template <class Real>
struct ScanResult {
  std::vector<ScanRow> rows;
  int selected_m = 0;
  int selected_nmax = 0;
  double selected_c0 = 0.0;
};

/// Reduced-model fits over an (m, N) grid with plateau detection.
///
/// For each m the plateau is where |c0(N) - c0(N+1)| is smallest (ties go to
/// the smaller N); the overall pick is the m with the tightest plateau.
template <class Real>
ScanResult<Real> model_scan(const SummandFamily<Real>& f, const EMConfig<Real>& config,
                            const std::vector<int>& nmax_range, const std::vector<int>& m_range) {
  if (nmax_range.empty() || m_range.empty()) throw DomainError("scan ranges must be non-empty");
  config.validate();
  EMConfig<Real> c = config;
  const int n0 = resolve_n0(f, c);
  auto g = sample_gamma(f, config.n, n0, m_range, config.sigma_grid);
  ScanResult<Real> out;
  double best_gap = std::numeric_limits<double>::infinity();
  bool plateau = false;
  for (int m : m_range) {
    const double eps = to_double(tail_bound_epsilon(f, n0, m, config.sigma_grid.front(),
                                                    Real(config.tolerances.epsilon_rel)));
    std::vector<std::pair<Real, Real>> samples;
    for (std::size_t i = 0; i < config.sigma_grid.size(); ++i)
      samples.emplace_back(config.sigma_grid[i], g[m][i]);
    std::vector<double> c0;
    for (int nm : nmax_range) {
      auto model = fit_laurent_log(samples, ModelSpec::reduced(nm));
      c0.push_back(to_double(model.constant()));
      out.rows.push_back({m, nm, c0.back(), eps});
    }
    for (std::size_t i = 0; i + 1 < c0.size(); ++i) {
      const double gap = std::abs(c0[i] - c0[i + 1]);
      if (gap <= 10.0 * eps) plateau = true;
      if (gap < best_gap) {
        best_gap = gap;
        out.selected_m = m;
        out.selected_nmax = nmax_range[i];
        out.selected_c0 = c0[i];
      }
    }
  }
  if (nmax_range.size() > 1 && !plateau) throw InstabilityError("no stable (m, N) plateau found");
  if (nmax_range.size() == 1) {
    out.selected_m = out.rows.front().m;
    out.selected_nmax = out.rows.front().nmax;
    out.selected_c0 = out.rows.front().c0;
  }
  return out;
}

}  // namespace emreg
