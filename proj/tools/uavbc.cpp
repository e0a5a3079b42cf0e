// uavbc: capacity regions of a UAV-served two-user broadcast channel.
//
//   uavbc region --scenario s.scn --mode sc --profiles 33 --out region.csv
//   uavbc compare --scenario s.scn --override V=0 --override V=30,T=20 --out cmp.csv
//   uavbc fixed --scenario s.scn --x -500 --x 0 --x 500 --out fixed.csv
//   uavbc oracle-check --scenario s.scn --profiles 8 --dp-slots 64 --dp-positions 51

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uavbc/cli.hpp"

namespace cli = uavbc::cli;

int main(int argc, char** argv) {
  CLI::App app{"Capacity regions of a UAV-served two-user broadcast channel"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out = "-";
  std::optional<int> profiles;
  std::vector<std::string> overrides;
  const auto common = [&](CLI::App* sub, bool with_profiles) {
    sub->add_option("--scenario", scenario_path, "Scenario file (key = value lines)");
    sub->add_option("--out", out, "CSV output path, '-' for stdout; JSON goes to <out>.json");
    if (with_profiles) sub->add_option("--profiles", profiles, "Number of rate profiles");
  };

  std::string mode = "sc";
  CLI::App* region = app.add_subcommand("region", "Trace one region boundary");
  common(region, true);
  region->add_option("--mode", mode, "sc | tdma | tinf | v0 | high-snr");
  region->add_option("--override", overrides, "Settings such as V=30,T=60,P=10dBm (applied in order)");

  CLI::App* compare = app.add_subcommand("compare", "One region per --override, merged");
  common(compare, true);
  compare->add_option("--mode", mode, "sc | tdma | tinf | v0 | high-snr");
  compare->add_option("--override", overrides, "One region per occurrence, e.g. V=30,T=20");

  std::vector<double> xs;
  CLI::App* fixed = app.add_subcommand("fixed", "Boundaries for a UAV fixed at given positions");
  common(fixed, true);
  fixed->add_option("--x", xs, "UAV position in m (repeatable)")->required();
  fixed->add_option("--override", overrides, "Settings applied before solving");

  std::optional<int> dp_slots;
  std::optional<int> dp_positions;
  std::optional<int> dp_legs;
  std::optional<double> tol;
  CLI::App* oracle = app.add_subcommand("oracle-check", "Solver against the trajectory DP");
  common(oracle, true);
  oracle->add_option("--dp-slots", dp_slots, "DP time slots");
  oracle->add_option("--dp-positions", dp_positions, "DP grid positions over [-D/2, D/2]");
  oracle->add_option("--dp-max-leg", dp_legs, "Longest DP flight leg in slots (1 = single-slot moves)");
  oracle->add_option("--tol", tol, "Relative gap tolerance");
  oracle->add_option("--override", overrides, "Settings applied before solving");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  cli::Scenario s;
  try {
    if (!scenario_path.empty()) s = cli::load_scenario(scenario_path);
    if (!compare->parsed()) {
      for (const std::string& o : overrides) cli::apply_override(s, o);
    }
    if (dp_slots) s.dp.n_slots = *dp_slots;
    if (dp_positions) s.dp.n_positions = *dp_positions;
    if (dp_legs) s.dp.max_leg_slots = *dp_legs;
    if (tol) s.oracle_tol = *tol;
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return cli::kExitConfig;
  }
  const int n = profiles.value_or(oracle->parsed() ? 8 : s.n_profiles);

  if (region->parsed()) return cli::cmd_region(s, mode, n, out, std::cerr);
  if (compare->parsed()) return cli::cmd_compare(s, overrides, mode, n, out, std::cerr);
  if (fixed->parsed()) return cli::cmd_fixed(s, xs, n, out, std::cerr);
  return cli::cmd_oracle_check(s, n, s.dp, out, std::cerr);
}
