#pragma once

// Achievable region when only one user is served at a time. User 1 is served
// first along the left-to-right trajectory and user 2 after the switch time
// t1, each with the full power budget.

#include <string>
#include <vector>

#include "uavbc/core_model.hpp"
#include "uavbc/region.hpp"

namespace uavbc {

/// Trajectory family a TDMA candidate came from.
enum class TdmaFamily {
  Corner,       // single-user hover
  Fixed,        // V = 0: one static position
  PureFlight,   // no hovering, VT < D
  HoverLeft,    // hover at -D/2, then fly
  HoverRight,   // fly, then hover at +D/2
  HoverBoth,    // hover at both users, VT >= D
};

std::string to_string(TdmaFamily f);

struct TdmaSearchConfig {
  int grid_points = 129;     // per one-parameter family
  int hover_split_points = 17;
  int golden_iters = 40;
  double t1_rel_tol = 1e-9;  // bisection stops at t1_rel_tol * T
  int threads = 1;
};

struct TdmaDiagnostics {
  TdmaFamily family = TdmaFamily::Corner;
  int candidates = 0;
  double grid_best_r = 0.0;
};

struct TdmaSolution {
  RateProfile profile;
  RatePair rate_pair;
  double r = 0.0;
  HfhTrajectory trajectory;
  double t1 = 0.0;
  TdmaDiagnostics diagnostics;
};

/// Average rates with user 1 served on [0, t1] and user 2 on (t1, T].
RatePair tdma_rates(const SystemParams& p, const HfhTrajectory& traj, double t1);

/// Switch time equalizing r1/alpha1 and r2/alpha2. Corner profiles return 0
/// or T directly.
double solve_t1(const SystemParams& p, const HfhTrajectory& traj,
                const RateProfile& profile, const TdmaSearchConfig& cfg = {});

/// Best TDMA boundary point for one profile over the trajectories that hover
/// only above the users.
TdmaSolution tdma_solve_profile(const SystemParams& p, const RateProfile& profile,
                                const TdmaSearchConfig& cfg = {});

/// Mirror image: swapped users, mirrored trajectory, t1 -> T - t1.
TdmaSolution mirror_solution(const SystemParams& p, const TdmaSolution& s);

struct TdmaRegionTrace {
  RegionBoundary boundary;
  std::vector<TdmaSolution> solutions;
};

TdmaRegionTrace tdma_trace_region(const SystemParams& p, int n_profiles,
                                  const TdmaSearchConfig& cfg = {});

}  // namespace uavbc
