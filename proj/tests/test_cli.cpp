#include "emreg/io/cli.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace emreg;
using namespace emreg::cli;

namespace {

int exit_code(const std::string& args) {
  const std::string cmd = std::string(EMREG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string capture(const std::string& args) {
  const auto path = std::filesystem::temp_directory_path() / "emreg_cli_capture.txt";
  const std::string cmd = std::string(EMREG_CLI_PATH) + " " + args + " > " + path.string() + " 2>/dev/null";
  EXPECT_EQ(std::system(cmd.c_str()), 0) << cmd;
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

RunConfig resolved(RunConfig c) {
  c.resolve();
  c.validate();
  return c;
}

}  // namespace

TEST(Config, JsonRoundTrip) {
  RunConfig c;
  c.command = "scan";
  c.system = "enz";
  c.sector = "tm";
  c.geometry.a = 2.5;
  c.m_range = {3, 6};
  c.omegas = {1.25, 7.0};
  c.format = "csv";
  const auto back = RunConfig::from_json(json::parse(dump_json(RunConfig::to_json(c))));
  EXPECT_TRUE(back == c);
}

TEST(Config, OverlayKeepsUnsetFields) {
  RunConfig base;
  base.m = 5;
  const auto c = RunConfig::from_json(json{{"sector", "te"}}, base);
  EXPECT_EQ(c.m, 5);
  EXPECT_EQ(c.sector, "te");
}

TEST(Config, UnknownKeysRejected) {
  EXPECT_THROW(RunConfig::from_json(json{{"sigma", 0.1}}), ConfigError);
  EXPECT_THROW(RunConfig::from_json(json{{"geometry", {{"lz", 1.0}}}}), ConfigError);
  EXPECT_THROW(RunConfig::from_json(json{{"m", "three"}}), ConfigError);
  EXPECT_THROW(RunConfig::from_json(json{{"schema_version", 2}}), ConfigError);
}

TEST(Config, Defaults) {
  RunConfig e;
  e = resolved(e);
  EXPECT_EQ(e.system, "cuboid");
  EXPECT_DOUBLE_EQ(e.sigma_min, 1.0 / 20000);
  EXPECT_EQ(e.grid_points, 64);
  RunConfig s;
  s.command = "stress";
  s.system = "enz";
  s = resolved(s);
  EXPECT_DOUBLE_EQ(s.sigma_min, 0.02);
  EXPECT_EQ(s.grid_points, 32);
}

TEST(Config, Validation) {
  RunConfig c;
  c.geometry.a = 0;
  EXPECT_THROW(resolved(c), ConfigError);
  RunConfig m;
  m.command = "modes";
  m.l_values.clear();
  EXPECT_THROW(resolved(m), ConfigError);
  RunConfig f;
  f.format = "xml";
  EXPECT_THROW(resolved(f), ConfigError);
  RunConfig g;
  g.sigma_min = 0.1;
  g.sigma_max = 0.01;
  EXPECT_THROW(resolved(g), ConfigError);
}

TEST(Output, SeventeenDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_number(-1.0 / 180)), -1.0 / 180);
  const std::string s = dump_json(json{{"x", 1.0 / 3}});
  EXPECT_NE(s.find("0.33333333333333331"), std::string::npos);
  EXPECT_NE(dump_json(json{{"x", NAN}}).find("null"), std::string::npos);
}

TEST(Output, CsvQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
  Table t{{"k", "v"}, {}};
  t.add({"x,y", "1"});
  EXPECT_EQ(t.to_csv(), "k,v\r\n\"x,y\",1\r\n");
}

TEST(Commands, CuboidEnergy) {
  RunConfig c;
  const auto r = run(c);
  EXPECT_NEAR(r.results["energy_coefficient"].get<double>(), -pi<double>() * pi<double>() / 720, 1e-14);
  for (const char* s : {"TE", "TM"}) {
    EXPECT_NEAR(r.results["sectors"][s]["analytic"]["beta"].get<double>(), -1.0 / 180, 1e-15);
    EXPECT_NEAR(r.results["sectors"][s]["fit"]["beta"].get<double>(), -1.0 / 180, 1e-8);
  }
  // the report re-parses into the same config and results
  const auto parsed = json::parse(r.render());
  EXPECT_TRUE(RunConfig::from_json(parsed["config"]) == r.config);
  EXPECT_EQ(parsed["results"], r.to_json()["results"]);
}

TEST(Commands, CuboidStress) {
  RunConfig c;
  c.command = "stress";
  const auto r = run(c);
  EXPECT_NEAR(r.results["pressure_coefficient"].get<double>(), -pi<double>() * pi<double>() / 240, 1e-10);
  EXPECT_LT(r.results["derivative_identity_residual"].get<double>(), 1e-6);
}

TEST(Commands, EnzStressNeedsCentre) {
  RunConfig c;
  c.command = "stress";
  c.system = "enz";
  c.z0 = 0.3;
  EXPECT_THROW(run(c), ConfigError);
}

TEST(Commands, ModesResidualAndParity) {
  RunConfig c;
  c.command = "modes";
  c.l_values = {0, 1};
  c.format = "csv";
  const auto r = run(c);
  EXPECT_LT(r.results["max_residual"].get<double>(), 1e-9);
  // rows run over z_points samples per l, symmetric about Z = 0
  const auto& rows = r.table.rows;
  const std::size_t n = static_cast<std::size_t>(c.z_points);
  ASSERT_EQ(rows.size(), 2 * n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_LT(std::abs(std::stod(rows[i][7])), 1e-9);
    const std::size_t block = i / n, j = i % n;
    const auto& mirror = rows[block * n + (n - 1 - j)];
    const int l = std::stoi(rows[i][0]);
    EXPECT_NEAR(std::stod(rows[i][3]), -std::stod(mirror[3]), 1e-15);
    EXPECT_NEAR(std::stod(rows[i][4]), (l % 2 ? -1 : 1) * std::stod(mirror[4]), 1e-14);
  }
  double prev = -1;
  for (const auto& s : r.results["spectrum"]) {
    EXPECT_GT(s["omega"].get<double>(), prev);
    prev = s["omega"].get<double>();
  }
}

TEST(Binary, ModesDeterministic) {
  const std::string args = "modes --l 0,1,2 --format csv";
  const std::string a = capture(args);
  const std::string b = capture(args);
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  std::istringstream in(a);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(split_csv_line(line).back(), "residual");
  while (std::getline(in, line)) EXPECT_LT(std::abs(std::stod(split_csv_line(line).back())), 1e-9);
}

TEST(Binary, ExitCodes) {
  EXPECT_EQ(exit_code("energy --a 0"), kExitConfig);
  EXPECT_EQ(exit_code("energy --a -1"), kExitConfig);
  EXPECT_EQ(exit_code("modes --l \"\""), kExitConfig);
  EXPECT_EQ(exit_code("energy --format xml"), kExitConfig);
  EXPECT_EQ(exit_code("energy --no-such-flag"), kExitConfig);
  EXPECT_EQ(exit_code("energy --system enz --sector te --n0 0"), kExitNumeric);
  EXPECT_EQ(exit_code("energy --print-config"), kExitOk);
}

TEST(Binary, ConfigFileAndOutput) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto cfg = dir / "emreg_cli_test.json";
  const auto out = dir / "emreg_cli_test_out.json";
  {
    std::ofstream f(cfg);
    f << R"({"command": "energy", "sector": "tm", "geometry": {"a": 2.0}})";
  }
  ASSERT_EQ(exit_code("energy --config " + cfg.string() + " --out " + out.string()), kExitOk);
  std::ifstream in(out);
  const json j = json::parse(in);
  EXPECT_EQ(j["config"]["sector"], "tm");
  EXPECT_NEAR(j["results"]["energy_per_area"].get<double>(), -pi<double>() * pi<double>() / 1440 / 8, 1e-15);
  {
    std::ofstream f(cfg);
    f << R"({"bogus": 1})";
  }
  EXPECT_EQ(exit_code("energy --config " + cfg.string()), kExitConfig);
}
