// emreg command line driver.
#include "emreg/io/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

template <class T>
void overlay(std::optional<T>& flag, T& field) {
  if (flag) field = *flag;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace emreg::cli;
  CLI::App app{"Euler-Maclaurin regularization of waveguide Casimir sums"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::string> system, sector, format, out;
  std::optional<int> m, nmax_power, positive, grid_points, n0, z_points;
  std::optional<double> sigma_min, sigma_max, quad_rel, z0, lx, ly, a, kappa0, theta, z_min, z_max, length,
      growth_sigma;
  std::optional<std::vector<int>> l_values, m_range, nmax_range;
  std::optional<std::vector<double>> omegas;
  bool print_config = false;

  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--system", system, "cuboid | enz");
  app.add_option("--sector", sector, "te | tm | both");
  app.add_option("--m", m, "Euler-Maclaurin order");
  app.add_option("--n0", n0, "split index (-1: automatic)");
  app.add_option("--nmax-power", nmax_power, "highest inverse power in the fit");
  app.add_option("--positive-powers", positive, "highest positive power in the fit");
  app.add_option("--sigma-min", sigma_min);
  app.add_option("--sigma-max", sigma_max);
  app.add_option("--grid-points", grid_points);
  app.add_option("--quadrature-rel", quad_rel);
  app.add_option("--z0", z0, "evaluation height (stress)");
  app.add_option("--lx", lx);
  app.add_option("--ly", ly);
  app.add_option("--a", a);
  app.add_option("--kappa0", kappa0);
  app.add_option("--format", format, "json | csv");
  app.add_option("--out", out, "output file (default stdout)");
  app.add_flag("--print-config", print_config, "print the resolved configuration and exit");

  auto* energy = app.add_subcommand("energy", "regularized Casimir energy");
  auto* stress = app.add_subcommand("stress", "regularized Casimir stress");
  auto* scan = app.add_subcommand("scan", "fit-model scan over (m, N)");
  scan->add_option("--m-range", m_range)->delimiter(',');
  scan->add_option("--nmax-range", nmax_range)->delimiter(',');
  auto* modes = app.add_subcommand("modes", "ENZ mode functions");
  auto* l_opt = modes->add_option("--l", l_values)->delimiter(',');
  modes->add_option("--theta", theta);
  modes->add_option("--z-min", z_min);
  modes->add_option("--z-max", z_max);
  modes->add_option("--z-points", z_points);
  auto* dos = app.add_subcommand("dos", "mode counting and density of states");
  dos->add_option("--omega", omegas)->delimiter(',');
  dos->add_option("--length", length, "guide side L in units of a");
  dos->add_option("--growth-sigma", growth_sigma);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig c;
    if (!config_path.empty()) c = load_config_file(config_path);
    for (auto* sub : {energy, stress, scan, modes, dos})
      if (sub->parsed()) c.command = sub->get_name();
    overlay(system, c.system);
    overlay(sector, c.sector);
    overlay(format, c.format);
    overlay(out, c.out);
    overlay(m, c.m);
    overlay(n0, c.n0);
    overlay(nmax_power, c.nmax_power);
    overlay(positive, c.positive_powers);
    overlay(grid_points, c.grid_points);
    overlay(sigma_min, c.sigma_min);
    overlay(sigma_max, c.sigma_max);
    overlay(quad_rel, c.quadrature_rel);
    overlay(z0, c.z0);
    overlay(lx, c.geometry.lx);
    overlay(ly, c.geometry.ly);
    overlay(a, c.geometry.a);
    overlay(kappa0, c.geometry.kappa0);
    overlay(l_values, c.l_values);
    // an explicit empty list selects no modes rather than the defaults
    if (l_opt->count() > 0 && (!l_values || l_values->empty())) c.l_values.clear();
    overlay(m_range, c.m_range);
    overlay(nmax_range, c.nmax_range);
    overlay(theta, c.theta);
    overlay(z_min, c.z_min);
    overlay(z_max, c.z_max);
    overlay(z_points, c.z_points);
    overlay(omegas, c.omegas);
    overlay(length, c.guide_length);
    overlay(growth_sigma, c.growth_sigma);
    if (print_config) {
      c.resolve();
      c.validate();
      std::cout << dump_json(RunConfig::to_json(c));
      return kExitOk;
    }
    emit(run(c));
  } catch (const ConfigError& e) {
    std::cerr << "emreg: " << e.what() << "\n";
    return kExitConfig;
  } catch (const emreg::Error& e) {
    std::cerr << "emreg: numerical failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "emreg: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}
