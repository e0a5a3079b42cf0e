#include "uavbc/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "uavbc/asymptotic.hpp"
#include "uavbc/fixed_region.hpp"

namespace uavbc::cli {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
    throw ConfigError("bad number for " + key + ": '" + text + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("bad integer for " + key + ": '" + text + "'");
  }
  return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Power given as "<n>dBm", "<n>W" or a bare number in dBm.
double power_watts(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (ends_with(t, "dBm")) return dbm_to_watts(to_double(key, t.substr(0, t.size() - 3)));
  if (ends_with(t, "W")) return to_double(key, t.substr(0, t.size() - 1));
  return dbm_to_watts(to_double(key, t));
}

using Setter = std::function<void(Scenario&, const std::string&, const std::string&)>;

template <class Field>
Setter int_field(Field field) {
  return [field](Scenario& s, const std::string& k, const std::string& v) { field(s) = to_int(k, v); };
}

template <class Field>
Setter double_field(Field field) {
  return [field](Scenario& s, const std::string& k, const std::string& v) { field(s) = to_double(k, v); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"name", [](Scenario& s, const std::string&, const std::string& v) { s.name = trim(v); }},
      {"sigma2_dbm", [](Scenario& s, const std::string& k, const std::string& v) {
         s.params.sigma2 = dbm_to_watts(to_double(k, v));
       }},
      {"sigma2", [](Scenario& s, const std::string& k, const std::string& v) {
         s.params.sigma2 = power_watts(k, v);
       }},
      {"gamma0_db", [](Scenario& s, const std::string& k, const std::string& v) {
         s.params.gamma0 = db_to_linear(to_double(k, v));
       }},
      {"gamma0", [](Scenario& s, const std::string& k, const std::string& v) {
         const std::string t = trim(v);
         s.params.gamma0 = db_to_linear(to_double(k, ends_with(t, "dB") ? t.substr(0, t.size() - 2) : t));
       }},
      {"P_dbm", [](Scenario& s, const std::string& k, const std::string& v) {
         s.params.Pbar = dbm_to_watts(to_double(k, v));
       }},
      {"P", [](Scenario& s, const std::string& k, const std::string& v) {
         s.params.Pbar = power_watts(k, v);
       }},
      {"H", double_field([](Scenario& s) -> double& { return s.params.H; })},
      {"D", double_field([](Scenario& s) -> double& { return s.params.D; })},
      {"V", double_field([](Scenario& s) -> double& { return s.params.V; })},
      {"T", double_field([](Scenario& s) -> double& { return s.params.T; })},
      {"profiles", int_field([](Scenario& s) -> int& { return s.n_profiles; })},
      {"threads", int_field([](Scenario& s) -> int& { return s.threads; })},
      {"sc.n_slots", int_field([](Scenario& s) -> int& { return s.search.n_slots; })},
      {"sc.screen_slots", int_field([](Scenario& s) -> int& { return s.search.screen_slots; })},
      {"sc.max_slots", int_field([](Scenario& s) -> int& { return s.search.max_slots; })},
      {"sc.convergence_tol", double_field([](Scenario& s) -> double& { return s.search.convergence_tol; })},
      {"sc.grid_xi", int_field([](Scenario& s) -> int& { return s.search.grid_xi; })},
      {"sc.grid_xf", int_field([](Scenario& s) -> int& { return s.search.grid_xf; })},
      {"sc.grid_ti", int_field([](Scenario& s) -> int& { return s.search.grid_ti; })},
      {"sc.refine_rounds", int_field([](Scenario& s) -> int& { return s.search.refine_rounds; })},
      {"sc.golden_iters", int_field([](Scenario& s) -> int& { return s.search.golden_iters; })},
      {"sc.split_iters", int_field([](Scenario& s) -> int& { return s.search.split_iters; })},
      {"sc.mu_tol", double_field([](Scenario& s) -> double& { return s.search.power.mu_tol; })},
      {"sc.mu_max_iter", int_field([](Scenario& s) -> int& { return s.search.power.mu_max_iter; })},
      {"tdma.grid_points", int_field([](Scenario& s) -> int& { return s.tdma.grid_points; })},
      {"tdma.hover_split_points", int_field([](Scenario& s) -> int& { return s.tdma.hover_split_points; })},
      {"tdma.golden_iters", int_field([](Scenario& s) -> int& { return s.tdma.golden_iters; })},
      {"tdma.t1_rel_tol", double_field([](Scenario& s) -> double& { return s.tdma.t1_rel_tol; })},
      {"hover.grid_points", int_field([](Scenario& s) -> int& { return s.search.hover.grid_points; })},
      {"hover.x_tol", double_field([](Scenario& s) -> double& { return s.search.hover.x_tol; })},
      {"dp.n_slots", int_field([](Scenario& s) -> int& { return s.dp.n_slots; })},
      {"dp.n_positions", int_field([](Scenario& s) -> int& { return s.dp.n_positions; })},
      {"dp.mu_steps", int_field([](Scenario& s) -> int& { return s.dp.mu_steps; })},
      {"dp.mu_refine", int_field([](Scenario& s) -> int& { return s.dp.mu_refine; })},
      {"dp.rate_buckets", int_field([](Scenario& s) -> int& { return s.dp.rate_buckets; })},
      {"dp.max_leg_slots", int_field([](Scenario& s) -> int& { return s.dp.max_leg_slots; })},
      {"oracle.tol", double_field([](Scenario& s) -> double& { return s.oracle_tol; })},
  };
  return table;
}

void check_settings(const Scenario& s) {
  const auto need = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid setting: ") + what);
  };
  need(s.n_profiles >= 2, "profiles >= 2");
  need(s.threads >= 0, "threads >= 0");
  need(s.search.n_slots >= 2 && s.search.screen_slots >= 2, "sc slot counts >= 2");
  need(s.search.max_slots >= s.search.n_slots, "sc.max_slots >= sc.n_slots");
  need(s.search.convergence_tol > 0.0, "sc.convergence_tol > 0");
  need(s.search.grid_xi >= 2 && s.search.grid_xf >= 2 && s.search.grid_ti >= 1, "sc grid sizes");
  need(s.search.power.mu_tol > 0.0 && s.search.power.mu_max_iter >= 1, "sc.mu_tol, sc.mu_max_iter");
  need(s.tdma.grid_points >= 2 && s.tdma.hover_split_points >= 2, "tdma grid sizes");
  need(s.tdma.t1_rel_tol > 0.0 && s.tdma.t1_rel_tol < 1.0, "tdma.t1_rel_tol in (0, 1)");
  need(s.oracle_tol > 0.0, "oracle.tol > 0");
}

// Validated copy of the physical parameters; bad values are config errors.
SystemParams checked_params(const Scenario& s) {
  try {
    return validate_params(s.params);
  } catch (const InvalidParams& e) {
    throw ConfigError(e.what());
  }
}

// Runs a command body and maps failures to exit codes.
int guarded(std::ostream& log, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidParams& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const GridTooCoarse& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    log << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    log << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  }
}

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (path_ != "-") {
      file_.open(path_);
      if (!file_) throw ConfigError("cannot write " + path_);
    }
  }
  std::ostream& csv() { return path_ == "-" ? std::cout : file_; }
  void sidecar(const json& j) {
    if (path_ == "-") return;
    std::ofstream f(path_ + ".json");
    if (!f) throw ConfigError("cannot write " + path_ + ".json");
    f << j.dump(2) << "\n";
  }

 private:
  std::string path_;
  std::ofstream file_;
};

json to_json(const RatePair& r) { return {{"r1", r.r1}, {"r2", r.r2}}; }

json to_json(const HfhTrajectory& t) {
  return {{"x_I", t.x_I}, {"x_F", t.x_F}, {"t_I", t.t_I}, {"t_F", t.t_F}};
}

json to_json(const SystemParams& p) {
  return {{"gamma0", p.gamma0}, {"sigma2", p.sigma2}, {"H", p.H},  {"D", p.D},
          {"Pbar", p.Pbar},     {"P_dbm", watts_to_dbm(p.Pbar)}, {"V", p.V}, {"T", p.T}};
}

json to_json(const BoundarySolution& s) {
  json conv = json::array();
  for (const auto& [slots, r] : s.diagnostics.convergence) conv.push_back({{"slots", slots}, {"r", r}});
  json p1 = json::array();
  json p2 = json::array();
  for (const SlotPower& sp : s.schedule.slots) {
    p1.push_back(sp.p1);
    p2.push_back(sp.p2);
  }
  return {{"alpha1", s.profile.alpha1},
          {"alpha2", s.profile.alpha2},
          {"r", s.r},
          {"rate_pair", to_json(s.rate_pair)},
          {"trajectory", to_json(s.trajectory)},
          {"mu", s.mu},
          {"schedule", {{"slot_duration", s.schedule.slot_duration}, {"p1", p1}, {"p2", p2}}},
          {"diagnostics",
           {{"candidates", s.diagnostics.candidates},
            {"grid_best_r", s.diagnostics.grid_best_r},
            {"static_r", s.diagnostics.static_r},
            {"static_chosen", s.diagnostics.static_chosen},
            {"refine_history", s.diagnostics.refine_history},
            {"convergence", conv}}}};
}

json to_json(const TdmaSolution& s) {
  return {{"alpha1", s.profile.alpha1},
          {"alpha2", s.profile.alpha2},
          {"r", s.r},
          {"rate_pair", to_json(s.rate_pair)},
          {"trajectory", to_json(s.trajectory)},
          {"t1", s.t1},
          {"diagnostics",
           {{"family", to_string(s.diagnostics.family)},
            {"candidates", s.diagnostics.candidates},
            {"grid_best_r", s.diagnostics.grid_best_r}}}};
}

json to_json(const HoverSolution& s) {
  return {{"alpha1", s.profile.alpha1},
          {"alpha2", s.profile.alpha2},
          {"r", s.r()},
          {"rate_pair", to_json(s.rate_pair)},
          {"x_star", s.x_star},
          {"p1", s.p1},
          {"p2", s.p2}};
}

json to_json(const RegionPoint& pt) {
  json j = {{"alpha1", pt.profile.alpha1},
            {"alpha2", pt.profile.alpha2},
            {"rate_pair", to_json(pt.rate_pair)}};
  if (pt.trajectory) j["trajectory"] = to_json(*pt.trajectory);
  return j;
}

struct RegionRun {
  RegionBoundary boundary;
  json solutions = json::array();
};

RegionRun run_region(const Scenario& s, const SystemParams& p, const std::string& mode,
                     int n_profiles) {
  const int threads = effective_threads(s);
  RegionRun out;
  if (mode == "sc") {
    SearchConfig cfg = s.search;
    cfg.threads = threads;
    RegionTrace tr = trace_region(p, n_profiles, cfg);
    for (const BoundarySolution& sol : tr.solutions) out.solutions.push_back(to_json(sol));
    out.boundary = std::move(tr.boundary);
  } else if (mode == "tdma") {
    TdmaSearchConfig cfg = s.tdma;
    cfg.threads = threads;
    TdmaRegionTrace tr = tdma_trace_region(p, n_profiles, cfg);
    for (const TdmaSolution& sol : tr.solutions) out.solutions.push_back(to_json(sol));
    out.boundary = std::move(tr.boundary);
  } else if (mode == "v0") {
    out.boundary.mode = "v0";
    for (const RateProfile& prof : uniform_profiles(n_profiles)) {
      const HoverSolution h = solve_v0(p, prof, s.search.hover);
      out.boundary.points.push_back({prof, h.rate_pair, static_hover(p, h.x_star)});
      out.solutions.push_back(to_json(h));
    }
  } else if (mode == "tinf") {
    out.boundary = region_tinf(p, uniform_profiles(n_profiles));
    for (const RegionPoint& pt : out.boundary.points) out.solutions.push_back(to_json(pt));
  } else if (mode == "high-snr") {
    out.boundary = region_high_snr(p, uniform_profiles(n_profiles));
    for (const RegionPoint& pt : out.boundary.points) out.solutions.push_back(to_json(pt));
  } else {
    throw ConfigError("unknown mode '" + mode + "' (sc, tdma, tinf, v0, high-snr)");
  }
  return out;
}

void write_point(std::ostream& os, const RegionPoint& pt) {
  os << fmt(pt.profile.alpha1) << ',' << fmt(pt.profile.alpha2) << ',' << fmt(pt.rate_pair.r1)
     << ',' << fmt(pt.rate_pair.r2);
  if (pt.trajectory) {
    const HfhTrajectory& t = *pt.trajectory;
    os << ',' << fmt(t.x_I) << ',' << fmt(t.x_F) << ',' << fmt(t.t_I) << ',' << fmt(t.t_F);
  } else {
    os << ",,,,";
  }
}

}  // namespace

void apply_setting(Scenario& s, const std::string& key, const std::string& value) {
  const auto it = setters().find(trim(key));
  if (it == setters().end()) throw ConfigError("unknown key '" + trim(key) + "'");
  it->second(s, trim(key), value);
}

Scenario parse_scenario(std::istream& in) {
  Scenario s;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    try {
      apply_setting(s, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  check_settings(s);
  checked_params(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read scenario " + path);
  return parse_scenario(f);
}

void apply_override(Scenario& s, const std::string& list) {
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + item + "' is not key=value");
    apply_setting(s, item.substr(0, eq), item.substr(eq + 1));
  }
  check_settings(s);
}

int effective_threads(const Scenario& s) {
  if (const char* env = std::getenv("UAVBC_THREADS")) {
    return std::max(0, to_int("UAVBC_THREADS", env));
  }
  return s.threads;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int cmd_region(const Scenario& s, const std::string& mode, int n_profiles,
               const std::string& out, std::ostream& log) {
  return guarded(log, [&] {
    if (n_profiles < 2) throw ConfigError("profiles must be >= 2");
    const SystemParams p = checked_params(s);
    const RegionRun run = run_region(s, p, mode, n_profiles);
    Output o(out);
    std::ostream& os = o.csv();
    os << "alpha1,alpha2,r1,r2,x_I,x_F,t_I,t_F,mode\n";
    for (const RegionPoint& pt : run.boundary.points) {
      write_point(os, pt);
      os << ',' << run.boundary.mode << '\n';
    }
    for (const std::string& w : run.boundary.warnings) log << "warning: " << w << "\n";
    o.sidecar({{"scenario", s.name},
               {"params", to_json(p)},
               {"mode", run.boundary.mode},
               {"warnings", run.boundary.warnings},
               {"solutions", run.solutions}});
    return kExitOk;
  });
}

int cmd_compare(const Scenario& s, const std::vector<std::string>& overrides,
                const std::string& mode, int n_profiles, const std::string& out,
                std::ostream& log) {
  return guarded(log, [&] {
    if (n_profiles < 2) throw ConfigError("profiles must be >= 2");
    std::vector<Scenario> runs;
    if (overrides.empty()) runs.push_back(s);
    for (const std::string& o : overrides) {
      Scenario v = s;
      apply_override(v, o);
      runs.push_back(v);
    }
    std::vector<std::pair<SystemParams, RegionRun>> results;
    for (const Scenario& v : runs) {
      const SystemParams p = checked_params(v);
      results.emplace_back(p, run_region(v, p, mode, n_profiles));
    }
    Output o(out);
    std::ostream& os = o.csv();
    os << "V,T,P_dbm,mode,alpha1,alpha2,r1,r2,x_I,x_F,t_I,t_F\n";
    json regions = json::array();
    for (const auto& [p, run] : results) {
      for (const RegionPoint& pt : run.boundary.points) {
        os << fmt(p.V) << ',' << fmt(p.T) << ',' << fmt(watts_to_dbm(p.Pbar)) << ','
           << run.boundary.mode << ',';
        write_point(os, pt);
        os << '\n';
      }
      for (const std::string& w : run.boundary.warnings) log << "warning: " << w << "\n";
      regions.push_back({{"params", to_json(p)},
                         {"mode", run.boundary.mode},
                         {"warnings", run.boundary.warnings},
                         {"solutions", run.solutions}});
    }
    o.sidecar({{"scenario", s.name}, {"regions", regions}});
    return kExitOk;
  });
}

int cmd_fixed(const Scenario& s, const std::vector<double>& xs, int n_profiles,
              const std::string& out, std::ostream& log) {
  return guarded(log, [&] {
    if (n_profiles < 2) throw ConfigError("profiles must be >= 2");
    if (xs.empty()) throw ConfigError("no positions given");
    const SystemParams p = checked_params(s);
    for (double x : xs) {
      if (!(std::abs(x) <= 0.5 * p.D)) {
        throw ConfigError("position " + fmt(x) + " outside [-D/2, D/2]");
      }
    }
    const std::vector<RateProfile> profiles = uniform_profiles(n_profiles);
    Output o(out);
    std::ostream& os = o.csv();
    os << "x,alpha1,alpha2,p1,p2,r1,r2\n";
    json curves = json::array();
    for (double x : xs) {
      const std::vector<FixedBoundaryPoint> pts = fixed_region_sample(p, x, n_profiles);
      json rows = json::array();
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const FixedBoundaryPoint& b = pts[i];
        os << fmt(x) << ',' << fmt(profiles[i].alpha1) << ',' << fmt(profiles[i].alpha2) << ','
           << fmt(b.p1) << ',' << fmt(b.p2) << ',' << fmt(b.rate_pair.r1) << ','
           << fmt(b.rate_pair.r2) << '\n';
        rows.push_back({{"alpha1", profiles[i].alpha1},
                        {"alpha2", profiles[i].alpha2},
                        {"p1", b.p1},
                        {"p2", b.p2},
                        {"rate_pair", to_json(b.rate_pair)}});
      }
      curves.push_back({{"x", x}, {"points", rows}});
    }
    o.sidecar({{"scenario", s.name}, {"params", to_json(p)}, {"curves", curves}});
    return kExitOk;
  });
}

int cmd_oracle_check(const Scenario& s, int n_profiles, const DpConfig& dp,
                     const std::string& out, std::ostream& log) {
  return guarded(log, [&] {
    if (n_profiles < 2) throw ConfigError("profiles must be >= 2");
    const SystemParams p = checked_params(s);
    if (p.V > 0.0 && p.V * p.T / dp.n_slots < p.D / (dp.n_positions - 1) * (1.0 - 1e-12)) {
      throw GridTooCoarse("DP grid spacing " + fmt(p.D / (dp.n_positions - 1)) +
                          " m exceeds V * slot = " + fmt(p.V * p.T / dp.n_slots) + " m");
    }
    SearchConfig cfg = s.search;
    cfg.threads = effective_threads(s);
    const double spacing = p.D / (dp.n_positions - 1);
    Output o(out);
    std::ostream& os = o.csv();
    os << "alpha1,alpha2,r_solver,r_dp,gap,unidirectional,hover_clusters,pass\n";
    json rows = json::array();
    bool all_pass = true;
    for (const RateProfile& prof : uniform_profiles(n_profiles)) {
      const BoundarySolution sol = solve_profile(p, prof, cfg);
      const DpResult d = dp_trajectory_oracle(p, prof, dp);
      const double gap = sol.r > 0.0 ? std::abs(sol.r - d.r) / sol.r : std::abs(d.r);
      const bool uni = path_unidirectional(d.path, spacing);
      const int clusters = path_hover_clusters(d.path, spacing);
      const bool pass = gap <= s.oracle_tol && uni && clusters <= 2;
      all_pass = all_pass && pass;
      os << fmt(prof.alpha1) << ',' << fmt(prof.alpha2) << ',' << fmt(sol.r) << ',' << fmt(d.r)
         << ',' << fmt(gap) << ',' << (uni ? 1 : 0) << ',' << clusters << ','
         << (pass ? 1 : 0) << '\n';
      rows.push_back({{"alpha1", prof.alpha1},
                      {"alpha2", prof.alpha2},
                      {"solver", to_json(sol)},
                      {"dp",
                       {{"r", d.r},
                        {"rate_pair", to_json(d.rate_pair)},
                        {"mu", d.mu},
                        {"slot_duration", d.slot_duration},
                        {"grid_spacing", d.grid_spacing},
                        {"path", d.path}}},
                      {"gap", gap},
                      {"unidirectional", uni},
                      {"hover_clusters", clusters},
                      {"pass", pass}});
    }
    o.sidecar({{"scenario", s.name},
               {"params", to_json(p)},
               {"dp_config",
                {{"n_slots", dp.n_slots},
                 {"n_positions", dp.n_positions},
                 {"mu_steps", dp.mu_steps},
                 {"mu_refine", dp.mu_refine},
                 {"rate_buckets", dp.rate_buckets},
                 {"max_leg_slots", dp.max_leg_slots}}},
               {"tolerance", s.oracle_tol},
               {"rows", rows}});
    if (!all_pass) {
      log << "oracle disagreement beyond tolerance " << fmt(s.oracle_tol) << "\n";
      return kExitOracle;
    }
    return kExitOk;
  });
}

}  // namespace uavbc::cli
