#pragma once

// General finite-(V, T) capacity solver. For a fixed hover-fly-hover
// trajectory the power allocation is convex and is solved through its
// weighted-sum dual: a bisection on the weight mu with a closed-form split in
// every time slot. An outer search over (x_I, x_F, t_I) picks the trajectory.

#include <optional>
#include <string>
#include <vector>

#include "uavbc/asymptotic.hpp"
#include "uavbc/core_model.hpp"
#include "uavbc/region.hpp"

namespace uavbc {

/// One position per slot of duration slot_duration. When `source` is set the
/// slot rates are integrated along the continuous trajectory; otherwise the
/// UAV is taken to sit at positions[n] for the whole slot.
struct DiscretizedTrajectory {
  std::vector<double> positions;
  double slot_duration = 0.0;
  std::optional<HfhTrajectory> source;
};

/// Samples the trajectory at the midpoints of n_slots uniform slots.
DiscretizedTrajectory discretize(const SystemParams& p, const HfhTrajectory& traj,
                                 int n_slots);

/// Throws DiscretizationInvalid if the slots do not cover [0, T], leave the
/// user segment, or move faster than V.
void validate_discretization(const SystemParams& p, const DiscretizedTrajectory& d);

struct SlotPower {
  double p1 = 0.0;
  double p2 = 0.0;
};

struct PowerSchedule {
  double slot_duration = 0.0;
  std::vector<SlotPower> slots;
};

/// Maximizes mu * r1 + (1 - mu) * r2 of the superposition rates at x over
/// p1 + p2 = Pbar. The derivative in the strong user's power has an affine
/// numerator, so the maximizer is 0, Pbar, or the stationary point
/// p_s* = (mu_s h_s - mu_w h_w) / (h_s h_w (mu_w - mu_s)).
SlotPower per_slot_weighted_split(const SystemParams& p, double x, double mu);

struct PowerAllocationOptions {
  double mu_tol = 1e-6;  // stop once |r1/a1 - r2/a2| <= mu_tol * r
  int mu_max_iter = 60;
};

struct PowerAllocation {
  double r = 0.0;
  PowerSchedule schedule;
  RatePair rate_pair;
  double mu = 0.5;
  int iterations = 0;
};

/// Rate-profile optimum for a fixed trajectory. The final ratio is hit
/// exactly by switching slots from the lower-mu split to the upper-mu split
/// in time order and interpolating the power in the one slot where the ratio
/// crosses.
PowerAllocation allocate_power(const SystemParams& p, const DiscretizedTrajectory& traj,
                               const RateProfile& profile, const PowerAllocationOptions& opts = {});

struct SearchConfig {
  int n_slots = 512;        // slots for refinement and the final answer
  int screen_slots = 128;   // slots while screening the coarse grid
  int max_slots = 8192;
  double convergence_tol = 1e-6;
  int grid_xi = 17;
  int grid_xf = 17;
  int grid_ti = 9;
  int refine_rounds = 3;
  int golden_iters = 24;     // per coordinate of (x_I, x_F) in each round
  int split_iters = 32;      // hover-split search inside each evaluation
  PowerAllocationOptions power;
  HoverSearchConfig hover;
  int threads = 1;  // 0 = one per hardware thread
};

struct SearchTrace {
  int candidates = 0;
  double grid_best_r = 0.0;
  double static_r = 0.0;
  bool static_chosen = false;
  std::vector<double> refine_history;
  std::vector<std::pair<int, double>> convergence;  // (slots, r)
};

struct BoundarySolution {
  RateProfile profile;
  RatePair rate_pair;
  double r = 0.0;
  HfhTrajectory trajectory;
  PowerSchedule schedule;
  double mu = 0.5;
  SearchTrace diagnostics;
};

/// Mirror image of a solution: swapped users, mirrored and time-reversed
/// trajectory, reversed schedule.
BoundarySolution mirror_solution(const BoundarySolution& s);

/// Pareto-boundary point for one profile.
BoundarySolution solve_profile(const SystemParams& p, const RateProfile& profile,
                               const SearchConfig& cfg = {});

struct RegionTrace {
  RegionBoundary boundary;
  std::vector<BoundarySolution> solutions;
};

/// Boundary for alpha1 = 0, 1/(n-1), ..., 1. Only profiles with
/// alpha2 >= alpha1 are solved; the rest are mirror images.
RegionTrace trace_region(const SystemParams& p, int n_profiles,
                         const SearchConfig& cfg = {});

}  // namespace uavbc
