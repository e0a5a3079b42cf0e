#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uavbc/core_model.hpp"

namespace uavbc {

struct RegionPoint {
  RateProfile profile;
  RatePair rate_pair;
  std::optional<HfhTrajectory> trajectory;
};

/// Pareto boundary points ordered by increasing alpha1, each tagged with the
/// profile (and trajectory, where one exists) that generated it.
struct RegionBoundary {
  std::string mode;
  std::vector<RegionPoint> points;
  std::vector<std::string> warnings;
};

}  // namespace uavbc
