#pragma once

// Capacity regions of the two-user AWGN broadcast channel seen from a fixed
// UAV position, plus the geometry used to compare two such regions: where
// their boundaries cross, their upper-right common tangent, and whether a
// third region fits under that tangent.

#include <vector>

#include "uavbc/core_model.hpp"

namespace uavbc {

struct FixedBoundaryPoint {
  double x = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  RatePair rate_pair;
};

struct TangentLine {
  double slope = -1.0;  // dr2/dr1, negative
  RatePair touch_B;     // touch point on the region at the larger position
  RatePair touch_C;     // touch point on the region at the smaller position

  /// r2 on the line at the given r1.
  double r2_at(double r1) const { return slope * (r1 - touch_C.r1) + touch_C.r2; }
};

/// Boundary point of C_f(x) reached when the strong user gets `strong_power`
/// and the weak user the rest of the budget.
FixedBoundaryPoint boundary_at_strong_power(const SystemParams& p, double x,
                                            double strong_power);

/// Boundary point of C_f(x) with r1 : r2 = alpha1 : alpha2.
FixedBoundaryPoint fixed_boundary(const SystemParams& p, double x,
                                  const RateProfile& profile);

/// n boundary points for alpha1 = 0, 1/(n-1), ..., 1.
std::vector<FixedBoundaryPoint> fixed_region_sample(const SystemParams& p,
                                                    double x, int n);

/// Point of C_f(x) maximizing mu * r1 + (1 - mu) * r2, located by bisection
/// on the analytic boundary slope.
FixedBoundaryPoint support_point(const SystemParams& p, double x, double mu);

/// r2 on the boundary of C_f(x) at the given r1 (0 <= r1 <= r1_max(x)).
double boundary_r2_at(const SystemParams& p, double x, double r1);

/// Unique crossing of the boundaries of C_f(xB) and C_f(xC), xC < xB.
RatePair intersection_point(const SystemParams& p, double xB, double xC);

/// Upper-right common tangent of C_f(xB) and C_f(xC), xC < xB.
TangentLine common_tangent(const SystemParams& p, double xB, double xC);

/// True iff every sampled boundary point of C_f(x) lies under the common
/// tangent of C_f(xI) and C_f(xF). Requires xI <= x <= xF.
bool triangle_contains(const SystemParams& p, double xI, double xF, double x,
                       int n_samples = 256);

}  // namespace uavbc
