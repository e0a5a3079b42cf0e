#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "uavbc/cli.hpp"

using namespace uavbc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "uavbc_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream f(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(f, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const fs::path& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

cli::Scenario parse(const std::string& text) {
  std::istringstream in(text);
  return cli::parse_scenario(in);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("scenario files") {
  const cli::Scenario s = parse(
      "# comment line\n"
      "name = demo\n"
      "P_dbm = 30   # one watt\n"
      "V = 12.5\n"
      "\n"
      "dp.n_positions = 41\n");
  CHECK(s.name == "demo");
  CHECK(s.params.Pbar == doctest::Approx(1.0));
  CHECK(s.params.V == 12.5);
  CHECK(s.params.sigma2 == doctest::Approx(1e-13));
  CHECK(s.dp.n_positions == 41);
  CHECK(s.n_profiles == 33);

  CHECK_THROWS_AS(parse("bogus = 1\n"), cli::ConfigError);
  CHECK_THROWS_AS(parse("V = fast\n"), cli::ConfigError);
  CHECK_THROWS_AS(parse("H = -3\n"), cli::ConfigError);
  CHECK_THROWS_AS(parse("just words\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::load_scenario("/nonexistent/x.scn"), cli::ConfigError);
}

TEST_CASE("shipped reference scenario") {
  const cli::Scenario s = cli::load_scenario(std::string(UAVBC_SCENARIO_DIR) + "/reference.scn");
  const SystemParams want = reference_params();
  CHECK(s.params.sigma2 == doctest::Approx(want.sigma2));
  CHECK(s.params.gamma0 == doctest::Approx(want.gamma0));
  CHECK(s.params.Pbar == doctest::Approx(want.Pbar));
  CHECK(s.params.H == want.H);
  CHECK(s.params.D == want.D);
  CHECK(s.params.V == want.V);
  CHECK(s.params.T == want.T);
  CHECK(s.dp.n_slots == 64);
  CHECK(s.dp.n_positions == 51);
}

TEST_CASE("overrides") {
  cli::Scenario s;
  cli::apply_override(s, "V=0,T=20,P=30dBm");
  CHECK(s.params.V == 0.0);
  CHECK(s.params.T == 20.0);
  CHECK(s.params.Pbar == doctest::Approx(1.0));
  cli::apply_override(s, "P=0.5W");
  CHECK(s.params.Pbar == 0.5);
  CHECK_THROWS_AS(cli::apply_override(s, "V"), cli::ConfigError);
  CHECK_THROWS_AS(cli::apply_override(s, "profiles=1"), cli::ConfigError);
}

TEST_CASE("thread count from the environment") {
  cli::Scenario s;
  s.threads = 3;
  unsetenv("UAVBC_THREADS");
  CHECK(cli::effective_threads(s) == 3);
  setenv("UAVBC_THREADS", "0", 1);
  CHECK(cli::effective_threads(s) == 0);
  unsetenv("UAVBC_THREADS");
}

TEST_CASE("region command") {
  std::ostringstream log;
  const cli::Scenario s;
  const fs::path out = scratch("tinf.csv");
  REQUIRE(cli::cmd_region(s, "tinf", 33, out.string(), log) == cli::kExitOk);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 34);
  CHECK(rows[0] == std::vector<std::string>{"alpha1", "alpha2", "r1", "r2", "x_I", "x_F", "t_I", "t_F", "mode"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][2]) + std::stod(rows[i][3]) == doctest::Approx(6.6582).epsilon(1e-4));
    CHECK(rows[i][8] == "tinf");
  }
  const auto sidecar = nlohmann::json::parse(slurp(out.string() + ".json"));
  CHECK(sidecar["mode"] == "tinf");
  CHECK(sidecar["solutions"].size() == 33);

  const fs::path corners = scratch("corners.csv");
  REQUIRE(cli::cmd_region(s, "tdma", 2, corners.string(), log) == cli::kExitOk);
  CHECK(read_csv(corners).size() == 3);

  CHECK(cli::cmd_region(s, "nonsense", 3, scratch("x.csv").string(), log) == cli::kExitConfig);
  cli::Scenario low = s;
  CHECK(cli::cmd_region(low, "high-snr", 3, scratch("h.csv").string(), log) == cli::kExitSolver);
}

TEST_CASE("TDMA rows lie inside the superposition rows") {
  std::ostringstream log;
  cli::Scenario s;
  cli::apply_override(s, "T=20");
  const fs::path sc = scratch("sc.csv");
  const fs::path td = scratch("td.csv");
  REQUIRE(cli::cmd_region(s, "sc", 5, sc.string(), log) == cli::kExitOk);
  REQUIRE(cli::cmd_region(s, "tdma", 5, td.string(), log) == cli::kExitOk);
  const auto a = read_csv(sc);
  const auto b = read_csv(td);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 1; i < a.size(); ++i) {
    CHECK(std::stod(b[i][2]) <= std::stod(a[i][2]) + 1e-6);
    CHECK(std::stod(b[i][3]) <= std::stod(a[i][3]) + 1e-6);
  }
}

TEST_CASE("repeated runs are byte-identical") {
  std::ostringstream log;
  cli::Scenario s;
  const fs::path a = scratch("rep_a.csv");
  const fs::path b = scratch("rep_b.csv");
  REQUIRE(cli::cmd_region(s, "tdma", 9, a.string(), log) == cli::kExitOk);
  REQUIRE(cli::cmd_region(s, "tdma", 9, b.string(), log) == cli::kExitOk);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a.string() + ".json") == slurp(b.string() + ".json"));
}

TEST_CASE("compare command") {
  std::ostringstream log;
  const cli::Scenario s;
  const fs::path single = scratch("cmp1.csv");
  REQUIRE(cli::cmd_compare(s, {}, "tdma", 5, single.string(), log) == cli::kExitOk);
  CHECK(read_csv(single).size() == 6);

  const fs::path three = scratch("cmp3.csv");
  REQUIRE(cli::cmd_compare(s, {"V=0", "V=30,T=20", "V=30,T=60"}, "tdma", 9, three.string(), log) ==
          cli::kExitOk);
  const auto rows = read_csv(three);
  REQUIRE(rows.size() == 28);
  CHECK(rows[0][0] == "V");
  CHECK(rows[0][3] == "mode");
  for (int i = 1; i <= 9; ++i) {
    const double r0 = std::stod(rows[static_cast<std::size_t>(i)][6]);
    const double r1 = std::stod(rows[static_cast<std::size_t>(i + 9)][6]);
    const double r2 = std::stod(rows[static_cast<std::size_t>(i + 18)][6]);
    CHECK(r0 <= r1 + 1e-9);
    CHECK(r1 <= r2 + 1e-9);
  }
  CHECK(cli::cmd_compare(s, {"V=-1"}, "tdma", 3, scratch("bad.csv").string(), log) == cli::kExitConfig);
}

TEST_CASE("fixed command") {
  std::ostringstream log;
  const cli::Scenario s;
  const fs::path out = scratch("fixed.csv");
  REQUIRE(cli::cmd_fixed(s, {-500.0, 0.0, 500.0}, 11, out.string(), log) == cli::kExitOk);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 34);
  CHECK(rows[0] == std::vector<std::string>{"x", "alpha1", "alpha2", "p1", "p2", "r1", "r2"});
  for (std::size_t i = 12; i <= 22; ++i) {
    CHECK(rows[i][0] == "0");
    CHECK(std::stod(rows[i][5]) + std::stod(rows[i][6]) == doctest::Approx(2.2768).epsilon(1e-4));
  }
  CHECK(cli::cmd_fixed(s, {600.0}, 5, scratch("f.csv").string(), log) == cli::kExitConfig);
}

TEST_CASE("oracle-check command") {
  std::ostringstream log;
  cli::Scenario s;
  DpConfig coarse = s.dp;
  coarse.n_positions = 8;
  CHECK(cli::cmd_oracle_check(s, 3, coarse, scratch("o.csv").string(), log) == cli::kExitConfig);

  cli::apply_override(s, "V=0");
  const fs::path out = scratch("oracle_v0.csv");
  REQUIRE(cli::cmd_oracle_check(s, 5, s.dp, out.string(), log) == cli::kExitOk);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][4]) <= 5e-3);
    CHECK(rows[i][7] == "1");
  }

  cli::Scenario strict = s;
  strict.oracle_tol = 1e-9;
  CHECK(cli::cmd_oracle_check(strict, 3, strict.dp, scratch("o2.csv").string(), log) ==
        cli::kExitOracle);
}

}  // TEST_SUITE
