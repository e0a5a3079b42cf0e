#pragma once

// Closed-form and near-closed-form regions for the limiting regimes: an
// unlimited flight duration, a UAV that cannot move, and high SNR.

#include <vector>

#include "uavbc/core_model.hpp"
#include "uavbc/region.hpp"

namespace uavbc {

struct HoverSolution {
  double x_star = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  RatePair rate_pair;
  RateProfile profile;

  /// Common rate scale r with r_k = alpha_k r.
  double r() const;
};

/// The T -> infinity region: r1 + r2 = log2(1 + Pbar beta0 / H^2), sampled at
/// the given profiles. Independent of V and D.
RegionBoundary region_tinf(const SystemParams& p,
                           const std::vector<RateProfile>& profiles);

/// Hover-above-each-user TDMA point that loses the fraction D/(VT) of the
/// flight to travelling. Throws InfeasibleFlight when VT < D.
RatePair hfh_tdma_achievable(const SystemParams& p, const RateProfile& profile);

struct HoverSearchConfig {
  int grid_points = 257;
  double x_tol = 1e-6;  // golden-section tolerance, in metres
};

/// Best static hover position and power split for a profile (V -> 0).
HoverSolution solve_v0(const SystemParams& p, const RateProfile& profile,
                       const HoverSearchConfig& cfg = {});

/// Strong-user power solving the equal-ratio condition at a hover position
/// x in [0, D/2] (user 2 strong), by bisection.
double hover_strong_power(const SystemParams& p, double x,
                          const RateProfile& profile);

struct HighSnrConfig {
  double hard_floor = 10.0;
  double warn_below = 100.0;
};

/// Pbar beta0 / (D^2 + H^2), the far-user SNR that gauges the high-SNR
/// approximation.
double far_user_snr(const SystemParams& p);

/// r1 + r2 = log2(Pbar beta0 / H^2) with a static hover above the user that
/// takes the larger share. Throws OutsideValidity below the hard floor and
/// records a warning below the warning threshold.
RegionBoundary region_high_snr(const SystemParams& p,
                               const std::vector<RateProfile>& profiles,
                               const HighSnrConfig& cfg = {});

}  // namespace uavbc
