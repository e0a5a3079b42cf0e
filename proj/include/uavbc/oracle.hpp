#pragma once

// Brute-force cross-checks for the solvers: a time-position dynamic program
// that imposes no trajectory shape, exhaustive power-split scans, a numeric
// boundary-crossing search, a direct convex-hull membership test, and an
// independent feasibility re-check of returned solutions.

#include <string>
#include <vector>

#include "uavbc/core_model.hpp"
#include "uavbc/hfh_solver.hpp"
#include "uavbc/tdma_solver.hpp"

namespace uavbc {

struct DpConfig {
  int n_slots = 64;
  int n_positions = 51;  // uniform grid over [-D/2, D/2]
  int mu_steps = 11;       // weight grid before refinement
  int mu_refine = 16;      // golden-section steps around the best grid weight
  int rate_buckets = 4096; // resolution of the accumulated user-1 rate
  int max_leg_slots = 6;   // longest constant-speed flight leg; 1 = single-slot moves only
};

struct DpResult {
  double r = 0.0;
  RatePair rate_pair;
  double mu = 0.5;
  double slot_duration = 0.0;
  double grid_spacing = 0.0;
  std::vector<double> path;  // one grid position per slot
};

/// Best discretized trajectory for a profile. Each slot holds the UAV at one
/// position; consecutive slots may differ by at most V * slot length. A path
/// either stays on a grid point or moves to another one, in one slot or in a
/// constant-speed leg of up to max_leg_slots slots whose intermediate slots
/// lie between grid points. For
/// each weight on the outer search the per-position power splits are fixed
/// and a dynamic program over (slot, position, accumulated user-1 rate)
/// picks the path; every path found is then re-scored with its own optimal
/// powers. Throws GridTooCoarse if V > 0 and one grid step is longer than
/// V * slot length.
DpResult dp_trajectory_oracle(const SystemParams& p, const RateProfile& profile,
                              const DpConfig& cfg = {});

/// Centred moving average over `window` slots; the window shrinks
/// symmetrically near the ends so the first and last slots are kept.
std::vector<double> path_smooth(const std::vector<double>& path, int window);

/// True if the smoothed path never steps back by more than `noise` against
/// its net direction.
bool path_unidirectional(const std::vector<double>& path, double noise, int window = 5);

/// Number of places the smoothed path lingers: runs of slots moving less than
/// noise / 2 per slot, with runs centred within `noise` of the previous run
/// merged into it.
int path_hover_clusters(const std::vector<double>& path, double noise, int window = 5);

/// Exhaustive scan of `n_splits` uniformly spaced power splits at x for the
/// weighted rate mu * r1 + (1 - mu) * r2.
SlotPower grid_power_oracle(const SystemParams& p, double x, double mu,
                            int n_splits = 10001);

/// Crossing of the boundaries of C_f(xB) and C_f(xC) found by bisection on
/// r1 of r2^B(r1) - r2^C(r1). Throws NoSignChange if the difference does not
/// change sign.
RatePair numeric_intersection_oracle(const SystemParams& p, double xB, double xC);

/// Whether every sampled boundary point of C_f(x) lies in the convex hull of
/// densely sampled C_f(xI) and C_f(xF).
bool hull_membership_oracle(const SystemParams& p, double xI, double xF, double x,
                            int n_samples = 256, int hull_samples = 8192);

struct FeasibilityConfig {
  double eps = 1e-6;
  int sub_intervals = 4;  // quadrature pieces per schedule slot
  double quad_tol = 1e-11;
};

struct FeasibilityReport {
  double rate_violation = 0.0;     // worst shortfall of the three rate bounds
  double speed_violation = 0.0;    // metres beyond V * dt between samples
  double power_violation = 0.0;    // relative to Pbar
  double profile_violation = 0.0;  // worst alpha_k r - r_k
  RatePair bound_single;           // re-integrated single-user bounds
  double bound_sum = 0.0;          // re-integrated sum bound
  bool pass = false;
  std::string detail;
};

FeasibilityReport check_feasibility(const SystemParams& p, const BoundarySolution& s,
                                    const FeasibilityConfig& cfg = {});
FeasibilityReport check_feasibility(const SystemParams& p, const TdmaSolution& s,
                                    const FeasibilityConfig& cfg = {});

}  // namespace uavbc
