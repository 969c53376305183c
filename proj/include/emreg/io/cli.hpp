#pragma once

#include "emreg/dos.hpp"
#include "emreg/em.hpp"
#include "emreg/error.hpp"
#include "emreg/extractor.hpp"
#include "emreg/real.hpp"
#include "emreg/regularize.hpp"
#include "emreg/spectra.hpp"
#include "emreg/summands.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace emreg::cli {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Invalid or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::string command = "energy";  // energy | stress | scan | modes | dos
  std::string system;              // cuboid | enz; empty picks the command default
  std::string quantity;            // energy | stress; empty follows the command
  std::string sector = "both";     // te | tm | both
  GuideGeometry geometry;
  int m = 3;
  int n0 = -1;
  int nmax_power = 4;
  int positive_powers = 3;
  double sigma_min = 0.0;  // 0: system default
  double sigma_max = 0.0;
  int grid_points = 0;
  double quadrature_rel = 0.0;
  double z0 = 0.0;
  std::vector<int> m_range{3, 4, 5, 6, 7, 8};
  std::vector<int> nmax_range{2, 3, 4, 5, 6, 7};
  std::vector<int> l_values{0, 1, 2, 3, 4};
  double theta = 1.0;
  double z_min = -3.0;
  double z_max = 3.0;
  int z_points = 121;
  std::vector<double> omegas{5.0, 10.0};
  double guide_length = 100.0;
  double growth_sigma = 0.01;
  std::string format = "json";
  std::string out;

  friend bool operator==(const RunConfig& x, const RunConfig& y) { return to_json(x) == to_json(y); }

  static json to_json(const RunConfig& c) {
    return json{{"schema_version", c.schema_version},
                {"command", c.command},
                {"system", c.system},
                {"quantity", c.quantity},
                {"sector", c.sector},
                {"geometry",
                 {{"lx", c.geometry.lx}, {"ly", c.geometry.ly}, {"a", c.geometry.a}, {"kappa0", c.geometry.kappa0}}},
                {"m", c.m},
                {"n0", c.n0},
                {"nmax_power", c.nmax_power},
                {"positive_powers", c.positive_powers},
                {"sigma_min", c.sigma_min},
                {"sigma_max", c.sigma_max},
                {"grid_points", c.grid_points},
                {"quadrature_rel", c.quadrature_rel},
                {"z0", c.z0},
                {"m_range", c.m_range},
                {"nmax_range", c.nmax_range},
                {"l_values", c.l_values},
                {"theta", c.theta},
                {"z_min", c.z_min},
                {"z_max", c.z_max},
                {"z_points", c.z_points},
                {"omegas", c.omegas},
                {"guide_length", c.guide_length},
                {"growth_sigma", c.growth_sigma},
                {"format", c.format},
                {"out", c.out}};
  }

  /// Overlay the keys of j onto base; unknown keys are rejected.
  static RunConfig from_json(const json& j) { return from_json(j, RunConfig{}); }

  static RunConfig from_json(const json& j, RunConfig base) {
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    const json known = to_json(RunConfig{});
    for (const auto& [k, v] : j.items()) {
      if (!known.contains(k)) throw ConfigError("unknown configuration key: " + k);
      if (k == "geometry") {
        if (!v.is_object()) throw ConfigError("geometry must be an object");
        for (const auto& [gk, gv] : v.items())
          if (!known["geometry"].contains(gk)) throw ConfigError("unknown geometry key: " + gk);
      }
    }
    try {
      auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
      };
      get("schema_version", base.schema_version);
      get("command", base.command);
      get("system", base.system);
      get("quantity", base.quantity);
      get("sector", base.sector);
      if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        if (g.contains("lx")) base.geometry.lx = g.at("lx").get<double>();
        if (g.contains("ly")) base.geometry.ly = g.at("ly").get<double>();
        if (g.contains("a")) base.geometry.a = g.at("a").get<double>();
        if (g.contains("kappa0")) base.geometry.kappa0 = g.at("kappa0").get<double>();
      }
      get("m", base.m);
      get("n0", base.n0);
      get("nmax_power", base.nmax_power);
      get("positive_powers", base.positive_powers);
      get("sigma_min", base.sigma_min);
      get("sigma_max", base.sigma_max);
      get("grid_points", base.grid_points);
      get("quadrature_rel", base.quadrature_rel);
      get("z0", base.z0);
      get("m_range", base.m_range);
      get("nmax_range", base.nmax_range);
      get("l_values", base.l_values);
      get("theta", base.theta);
      get("z_min", base.z_min);
      get("z_max", base.z_max);
      get("z_points", base.z_points);
      get("omegas", base.omegas);
      get("guide_length", base.guide_length);
      get("growth_sigma", base.growth_sigma);
      get("format", base.format);
      get("out", base.out);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad configuration value: ") + e.what());
    }
    if (base.schema_version != kSchemaVersion)
      throw ConfigError("unsupported schema_version " + std::to_string(base.schema_version));
    return base;
  }

  /// Fill command-dependent defaults.
  void resolve() {
    if (system.empty()) system = (command == "energy" || command == "stress") ? "cuboid" : "enz";
    if (quantity.empty()) quantity = command == "stress" ? "stress" : "energy";
    const bool enz = system == "enz";
    const bool stress = quantity == "stress";
    if (sigma_min == 0.0) sigma_min = enz && stress ? 0.02 : 1.0 / 20000;
    if (sigma_max == 0.0) sigma_max = enz && stress ? 0.2 : 1.0 / 2000;
    if (grid_points == 0) grid_points = enz && stress ? 32 : 64;
    if (quadrature_rel == 0.0) quadrature_rel = enz && stress ? 1e-12 : 1e-30;
  }

  void validate() const {
    static const std::set<std::string> commands{"energy", "stress", "scan", "modes", "dos"};
    if (!commands.count(command)) throw ConfigError("unknown command: " + command);
    if (system != "cuboid" && system != "enz") throw ConfigError("system must be cuboid or enz");
    if (quantity != "energy" && quantity != "stress") throw ConfigError("quantity must be energy or stress");
    if (command == "scan" && quantity != "energy") throw ConfigError("scan supports the energy only");
    if (sector != "te" && sector != "tm" && sector != "both") throw ConfigError("sector must be te, tm or both");
    if (!(geometry.lx > 0) || !(geometry.ly > 0) || !(geometry.a > 0) || !(geometry.kappa0 > 0))
      throw ConfigError("geometry values must be positive");
    if (m < 1) throw ConfigError("m must be >= 1");
    if (nmax_power < 0 || positive_powers < 0) throw ConfigError("model powers must be non-negative");
    if (!(sigma_min > 0) || !(sigma_max > sigma_min)) throw ConfigError("need 0 < sigma-min < sigma-max");
    if (grid_points < 2) throw ConfigError("grid-points must be >= 2");
    if (!(quadrature_rel > 0)) throw ConfigError("quadrature_rel must be positive");
    if (m_range.empty() || nmax_range.empty()) throw ConfigError("scan ranges must be non-empty");
    for (int v : m_range)
      if (v < 1) throw ConfigError("m_range entries must be >= 1");
    for (int v : nmax_range)
      if (v < 0) throw ConfigError("nmax_range entries must be >= 0");
    if (command == "modes" && l_values.empty()) throw ConfigError("no modes selected");
    for (int l : l_values)
      if (l < 0) throw ConfigError("l values must be non-negative");
    if (!(theta >= 0)) throw ConfigError("theta must be non-negative");
    if (!(z_max > z_min) || z_points < 2) throw ConfigError("invalid Z sampling");
    if (command == "dos" && omegas.empty()) throw ConfigError("no omega values given");
    for (double w : omegas)
      if (!(w >= 0)) throw ConfigError("omega values must be non-negative");
    if (!(guide_length > 0) || !(growth_sigma > 0)) throw ConfigError("dos parameters must be positive");
    if (format != "json" && format != "csv") throw ConfigError("format must be json or csv");
  }

  std::vector<Sector> sectors() const {
    if (sector == "te") return {Sector::TE};
    if (sector == "tm") return {Sector::TM};
    return {Sector::TE, Sector::TM};
  }
};

// ---------------------------------------------------------------------------
// Output

/// %.17g, with non-finite values spelled out.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void dump(const json& j, std::ostringstream& os, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(k).dump() << ": ";
        dump(v, os, indent, depth + 1);
      }
      os << "\n" << close << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        dump(j[i], os, indent, depth + 1);
      }
      os << "\n" << close << "]";
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      // JSON has no non-finite numbers
      if (!std::isfinite(x)) {
        os << "null";
        return;
      }
      os << format_number(x);
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// Pretty JSON with every float written to 17 significant digits.
inline std::string dump_json(const json& j) {
  std::ostringstream os;
  detail::dump(j, os, 2, 0);
  os << "\n";
  return os.str();
}

/// One RFC-4180 field.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }

  std::string to_csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) out += ',';
        out += csv_field(r[i]);
      }
      out += "\r\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

inline std::string num(double x) { return format_number(x); }

struct Report {
  RunConfig config;
  json results = json::object();
  Table table;

  json to_json() const {
    return json{{"schema_version", kSchemaVersion}, {"config", RunConfig::to_json(config)}, {"results", results}};
  }

  std::string render() const { return config.format == "csv" ? table.to_csv() : dump_json(to_json()); }
};

// ---------------------------------------------------------------------------
// Commands

template <class Real>
EMConfig<Real> em_config(const RunConfig& c) {
  EMConfig<Real> e;
  e.n = 0;
  e.n0 = c.n0;
  e.m = c.m;
  e.sigma_grid = log_grid<Real>(Real(c.sigma_min), Real(c.sigma_max), c.grid_points);
  e.tolerances.quadrature_rel = c.quadrature_rel;
  return e;
}

inline ModelSpec model_spec(const RunConfig& c) { return ModelSpec::extended(c.nmax_power, c.positive_powers); }

template <class Real>
json report_json(const RegularizationReport<Real>& r) {
  json sing = json::array();
  for (const auto& [jk, v] : r.singular_coefficients)
    sing.push_back({{"log_power", jk.first}, {"inverse_power", jk.second}, {"value", to_double(v)}});
  return json{{"beta", to_double(r.beta)},
              {"epsilon", to_double(r.epsilon_bound)},
              {"n", r.config.n},
              {"n0", r.config.n0},
              {"m", r.config.m},
              {"method", r.method},
              {"model", r.model},
              {"residual_norm", to_double(r.residual_norm)},
              {"condition", r.condition},
              {"singular", sing}};
}

template <class Real>
void add_sample_rows(Table& t, const std::string& label, const RegularizationReport<Real>& r) {
  for (const auto& [s, g] : r.samples) {
    const Real f = r.fitted(s);
    t.add({label, num(to_double(s)), num(to_double(g)), num(to_double(f)), num(to_double(g - f))});
  }
}

inline Table sample_table() { return Table{{"sector", "sigma", "gamma", "fitted", "residual"}, {}}; }

inline Report cmd_energy(const RunConfig& c) {
  Report rep{c, json::object(), sample_table()};
  if (c.system == "cuboid") {
    double sum = 0.0;
    json sec = json::object();
    for (Sector s : c.sectors()) {
      auto cfg = em_config<quad>(c);
      auto spec = model_spec(c);
      auto analytic = cuboid_energy<quad>(s, cfg, spec);
      spec.prefer_analytic = false;
      auto fit = cuboid_energy<quad>(s, cfg, spec);
      sec[to_string(s)] = {{"analytic", report_json(analytic)}, {"fit", report_json(fit)}};
      add_sample_rows(rep.table, to_string(s), fit);
      sum += to_double(analytic.beta);
    }
    rep.results["sectors"] = sec;
    rep.results["beta_total"] = sum;
    rep.results["energy_coefficient"] = pi<double>() * pi<double>() / 8.0 * sum;
    rep.results["energy_per_area"] = cuboid_energy_per_area(sum, c.geometry);
    rep.results["units"] = "hbar c / (sqrt(kappa0) a^3)";
    return rep;
  }
  json sec = json::object();
  double beta = 0.0, eps = 0.0;
  for (Sector s : c.sectors()) {
    auto r = extract_beta(energy_enz_family<quad>(s), em_config<quad>(c), model_spec(c));
    auto j = report_json(r);
    if (c.m == 3) j["closed_form"] = s == Sector::TE ? enz_energy_beta_te() : enz_energy_beta_tm();
    sec[to_string(s)] = j;
    add_sample_rows(rep.table, to_string(s), r);
    beta += to_double(r.beta);
    eps += to_double(r.epsilon_bound);
  }
  rep.results["sectors"] = sec;
  rep.results["beta_total"] = beta;
  rep.results["epsilon_total"] = eps;
  rep.results["ratio_to_casimir"] = enz_ratio_to_casimir(beta);
  rep.results["energy_per_area"] = enz_energy_per_area(beta, c.geometry);
  rep.results["units"] = "hbar c / (8 pi sqrt(kappa0) a^3)";
  return rep;
}

/// max |f(z0) - f(-z0)| / |f(z0)| over l = 0..3 at sigma.
inline double z0_parity_residual(const std::vector<Sector>& sectors, double sigma, double z0, const GuideGeometry& g) {
  double worst = 0.0;
  for (Sector s : sectors) {
    for (int l = 0; l <= 3; ++l) {
      const double p = f_stress_enz(s, sigma, l, z0, g);
      const double q = f_stress_enz(s, sigma, l, -z0, g);
      const double scale = std::max(std::abs(p), 1e-300);
      worst = std::max(worst, std::abs(p - q) / scale);
    }
  }
  return worst;
}

inline Report cmd_stress(const RunConfig& c) {
  Report rep{c, json::object(), sample_table()};
  if (c.system == "cuboid") {
    double pressure_sum = 0.0, energy_sum = 0.0;
    json sec = json::object();
    for (Sector s : c.sectors()) {
      auto cfg = em_config<quad>(c);
      auto p = cuboid_stress<quad>(s, cfg, model_spec(c));
      auto e = cuboid_energy<quad>(s, cfg, model_spec(c));
      sec[to_string(s)] = report_json(p);
      pressure_sum += to_double(p.beta);
      energy_sum += to_double(e.beta);
    }
    const double pressure = cuboid_pressure(pressure_sum, c.geometry);
    auto energy = [&](double a) {
      GuideGeometry g = c.geometry;
      g.a = a;
      return cuboid_energy_per_area(energy_sum, g);
    };
    const double derivative = minus_energy_derivative(energy, c.geometry.a, 0.01);
    rep.results["sectors"] = sec;
    rep.results["beta_total"] = pressure_sum;
    rep.results["pressure_coefficient"] = pi<double>() * pi<double>() / 8.0 * pressure_sum;
    rep.results["pressure"] = pressure;
    rep.results["minus_denergy_da"] = derivative;
    rep.results["derivative_identity_residual"] = std::abs(derivative - pressure) / std::abs(pressure);
    rep.results["units"] = "hbar c / (sqrt(kappa0) a^4)";
    return rep;
  }
  if (c.z0 != 0.0) throw ConfigError("ENZ stress regularization is available at z0 = 0 only");
  auto cfg = em_config<long double>(c);
  if (cfg.n0 < 1) cfg.n0 = 1;
  auto main = enz_stress<long double>(c.sectors(), c.geometry, cfg, model_spec(c), c.quadrature_rel);
  auto half = enz_stress<long double>(c.sectors(), c.geometry, cfg, model_spec(c), c.quadrature_rel / 2);
  json cls = json::array();
  for (const auto& [k, r] : main.classes) {
    auto j = report_json(r);
    j["sector"] = to_string(k.first);
    j["parity"] = k.second == 0 ? "even" : "odd";
    j["beta_half_tolerance"] = to_double(half.classes.at(k).beta);
    cls.push_back(j);
    add_sample_rows(rep.table, to_string(k.first) + (k.second == 0 ? "-even" : "-odd"), r);
  }
  const double beta = to_double(main.beta());
  const double eps = to_double(main.epsilon());
  const double shift = std::abs(beta - to_double(half.beta()));
  rep.results["classes"] = cls;
  rep.results["beta_total"] = beta;
  rep.results["epsilon_total"] = eps;
  rep.results["beta_half_tolerance"] = to_double(half.beta());
  rep.results["tolerance_shift"] = shift;
  rep.results["stable_within_epsilon"] = shift <= eps;
  rep.results["z0_parity_residual"] = z0_parity_residual(c.sectors(), c.sigma_min, 0.7 * c.geometry.a, c.geometry);
  return rep;
}

inline Report cmd_scan(const RunConfig& c) {
  Report rep{c, json::object(), Table{{"kind", "sector", "m", "nmax", "c0", "epsilon"}, {}}};
  auto cfg = em_config<quad>(c);
  std::map<int, double> combined, combined_eps;
  json sel = json::object();
  for (Sector s : c.sectors()) {
    auto f = c.system == "cuboid" ? energy_hom_family<quad>(s) : energy_enz_family<quad>(s);
    EMConfig<quad> e = cfg;
    e.n = c.system == "cuboid" ? cuboid_start(s) : 0;
    const int mtop = *std::max_element(c.m_range.begin(), c.m_range.end());
    if (e.n0 < e.n) e.n0 = c.system == "cuboid" ? e.n : select_n0(f, e.n, mtop, e.sigma_grid);
    const quad tol = std::max(quad(c.quadrature_rel), default_quadrature_tol<quad>());
    auto g = sample_gamma(f, e.n, e.n0, c.m_range, e.sigma_grid, tol);
    double best_gap = INFINITY;
    json pick;
    for (int m : c.m_range) {
      const double eps = to_double(tail_bound_epsilon(f, e.n0, m, e.sigma_grid.front(), quad(e.tolerances.epsilon_rel)));
      std::vector<std::pair<quad, quad>> samples;
      for (std::size_t i = 0; i < e.sigma_grid.size(); ++i) samples.emplace_back(e.sigma_grid[i], g[m][i]);
      std::vector<double> c0;
      for (int nm : c.nmax_range) {
        c0.push_back(to_double(fit_laurent_log(samples, ModelSpec::reduced(nm)).constant()));
        rep.table.add({"reduced", to_string(s), std::to_string(m), std::to_string(nm), num(c0.back()), num(eps)});
      }
      for (std::size_t i = 0; i + 1 < c0.size(); ++i) {
        const double gap = std::abs(c0[i] - c0[i + 1]);
        if (gap < best_gap) {
          best_gap = gap;
          pick = {{"m", m}, {"nmax", c.nmax_range[i]}, {"c0", c0[i]}, {"gap", gap}};
        }
      }
      const double ext = to_double(fit_laurent_log(samples, model_spec(c)).constant());
      rep.table.add({"extended", to_string(s), std::to_string(m), "", num(ext), num(eps)});
      combined[m] += ext;
      combined_eps[m] += eps;
    }
    sel[to_string(s)] = pick;
  }
  json comb = json::array();
  for (const auto& [m, b] : combined) {
    rep.table.add({"combined", "both", std::to_string(m), "", num(b), num(combined_eps[m])});
    comb.push_back({{"m", m}, {"beta", b}, {"epsilon", combined_eps[m]}});
  }
  rep.results["plateau"] = sel;
  rep.results["combined"] = comb;
  rep.results["rows"] = rep.table.rows.size();
  return rep;
}

inline Report cmd_modes(const RunConfig& c) {
  Report rep{c, json::object(), Table{{"l", "theta", "omega", "z", "value", "d1", "d2", "residual"}, {}}};
  json spectrum = json::array();
  double worst = 0.0;
  for (int l : c.l_values) {
    const auto mf = mode_function<double>(l, c.theta);
    spectrum.push_back({{"l", l}, {"theta", c.theta}, {"omega", mf.omega()}, {"weighted_norm", mf.weighted_norm()}});
    for (int i = 0; i < c.z_points; ++i) {
      const double z = c.z_min + (c.z_max - c.z_min) * i / (c.z_points - 1);
      const auto v = mf.eval(z);
      const double res = mf.residual(z);
      worst = std::max(worst, res);
      rep.table.add({std::to_string(l), num(c.theta), num(mf.omega()), num(z), num(v.value), num(v.d1), num(v.d2),
                     num(res)});
    }
  }
  rep.results["spectrum"] = spectrum;
  rep.results["max_residual"] = worst;
  return rep;
}

inline Report cmd_dos(const RunConfig& c) {
  Report rep{c, json::object(), Table{{"sector", "omega", "brute", "analytic", "asymptotic", "relative"}, {}}};
  json rows = json::array();
  for (Sector s : c.sectors()) {
    for (double w : c.omegas) {
      const auto n = count_modes_brute(s, w, c.guide_length, 1.0);
      const double v = dos_volume_analytic(s, w, c.guide_length, 1.0);
      const double asym = dos_volume_asymptotic(w, c.guide_length, 1.0);
      const double rel = v > 0 ? double(n) / v - 1.0 : NAN;
      rep.table.add({to_string(s), num(w), std::to_string(n), num(v), num(asym), num(rel)});
      rows.push_back({{"sector", to_string(s)}, {"omega", w}, {"brute", n}, {"analytic", v}, {"asymptotic", asym},
                      {"relative", rel}});
    }
  }
  rep.results["counts"] = rows;
  auto e = enz_energy(enz_energy_config<quad>(3, 64));
  const double c4 = to_double(e.te.singular_coefficients[{0, 4}] + e.tm.singular_coefficients[{0, 4}]);
  const auto growth = energy_growth_leading(c.growth_sigma, c4);
  rep.results["energy_growth"] = {{"sigma", c.growth_sigma},
                                  {"dos_estimate", growth.dos_estimate},
                                  {"singular_estimate", growth.singular_estimate},
                                  {"relative_gap", growth.relative_gap},
                                  {"c4_sum", c4}};
  return rep;
}

inline Report run(RunConfig c) {
  c.resolve();
  c.validate();
  if (c.command == "energy") return cmd_energy(c);
  if (c.command == "stress") return cmd_stress(c);
  if (c.command == "scan") return cmd_scan(c);
  if (c.command == "modes") return cmd_modes(c);
  return cmd_dos(c);
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }
  return RunConfig::from_json(j, base);
}

/// Write the rendered report to cfg.out or stdout.
inline void emit(const Report& r) {
  const std::string text = r.render();
  if (r.config.out.empty() || r.config.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(r.config.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + r.config.out);
  f << text;
}

}  // namespace emreg::cli
