#pragma once

// Command-line front end: scenario files, overrides, and the region /
// compare / fixed / oracle-check commands. Each command returns a process
// exit code; see kExit* below.

#include <iosfwd>
#include <string>
#include <vector>

#include "uavbc/errors.hpp"
#include "uavbc/hfh_solver.hpp"
#include "uavbc/oracle.hpp"
#include "uavbc/tdma_solver.hpp"

namespace uavbc::cli {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitOracle = 4;

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct Scenario {
  std::string name = "reference";
  SystemParams params = reference_params();
  int n_profiles = 33;
  SearchConfig search;
  TdmaSearchConfig tdma;
  DpConfig dp;
  double oracle_tol = 0.03;  // relative |r_solver - r_dp| / r_solver
  int threads = 1;           // 0 = one per hardware thread
};

/// Parses `key = value` lines; `#` starts a comment. Powers are given in
/// dBm and gains in dB (P_dbm, sigma2_dbm, gamma0_db); lengths in m, speed
/// in m/s, time in s. Throws ConfigError on unknown keys or bad values.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);

/// Applies one `key=value` setting using the scenario-file keys, plus the
/// shorthands P (with a dBm or W suffix), sigma2 (dBm) and gamma0 (dB).
void apply_setting(Scenario& s, const std::string& key, const std::string& value);

/// Applies a comma-separated list such as "V=30,T=60,P=10dBm".
void apply_override(Scenario& s, const std::string& list);

/// Thread count after the UAVBC_THREADS environment variable, if set.
int effective_threads(const Scenario& s);

/// Formats a number the way every output file does ("%.12g").
std::string fmt(double v);

/// Region boundary for mode sc | tdma | tinf | v0 | high-snr. Writes CSV to
/// `out` ("-" for stdout) and a JSON sidecar to out + ".json".
int cmd_region(const Scenario& s, const std::string& mode, int n_profiles,
               const std::string& out, std::ostream& log);

/// One region per override list (empty list: the base scenario only), merged
/// into a long-format CSV keyed by (V, T, P_dbm, mode).
int cmd_compare(const Scenario& s, const std::vector<std::string>& overrides,
                const std::string& mode, int n_profiles, const std::string& out,
                std::ostream& log);

/// Fixed-location boundaries, n_profiles points per position.
int cmd_fixed(const Scenario& s, const std::vector<double>& xs, int n_profiles,
              const std::string& out, std::ostream& log);

/// Solver against the trajectory DP on every profile; exit 4 if any gap
/// exceeds the tolerance or any DP path is not hover-fly-hover shaped.
int cmd_oracle_check(const Scenario& s, int n_profiles, const DpConfig& dp,
                     const std::string& out, std::ostream& log);

}  // namespace uavbc::cli
