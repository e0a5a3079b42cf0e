#include "uavbc/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "uavbc/numerics.hpp"

namespace uavbc {

double HoverSolution::r() const {
  double r = std::numeric_limits<double>::infinity();
  if (profile.alpha1 > 0.0) r = std::min(r, rate_pair.r1 / profile.alpha1);
  if (profile.alpha2 > 0.0) r = std::min(r, rate_pair.r2 / profile.alpha2);
  return r;
}

RegionBoundary region_tinf(const SystemParams& p,
                           const std::vector<RateProfile>& profiles) {
  const double sum = overhead_rate(p);
  RegionBoundary out;
  out.mode = "tinf";
  for (const RateProfile& prof : profiles) {
    out.points.push_back({prof, {prof.alpha1 * sum, prof.alpha2 * sum}, std::nullopt});
  }
  return out;
}

RatePair hfh_tdma_achievable(const SystemParams& p, const RateProfile& profile) {
  if (p.V <= 0.0 || p.V * p.T < p.D) {
    throw InfeasibleFlight("VT < D: cannot fly between the users in time");
  }
  const double scale = (1.0 - p.D / (p.V * p.T)) * overhead_rate(p);
  return {profile.alpha1 * scale, profile.alpha2 * scale};
}

double hover_strong_power(const SystemParams& p, double x,
                          const RateProfile& profile) {
  const double h1 = channel_gain(p, x, User::One);
  const double h2 = channel_gain(p, x, User::Two);
  // alpha1 * r2(p2) - alpha2 * r1(p2): first term rises, second falls.
  const auto gap = [&](double p2) {
    const double r2 = std::log2(1.0 + p2 * h2);
    const double r1 = std::log2(1.0 + (p.Pbar - p2) * h1 / (p2 * h1 + 1.0));
    return profile.alpha1 * r2 - profile.alpha2 * r1;
  };
  return numerics::bisect_increasing(gap, 0.0, p.Pbar);
}

HoverSolution solve_v0(const SystemParams& p, const RateProfile& profile,
                       const HoverSearchConfig& cfg) {
  if (profile.alpha1 > profile.alpha2) {
    HoverSolution m = solve_v0(p, profile.mirrored(), cfg);
    return {-m.x_star, m.p2, m.p1, m.rate_pair.swapped(), profile};
  }
  const double half = 0.5 * p.D;
  if (profile.alpha1 == 0.0) {
    return {half, 0.0, p.Pbar, sc_rate_pair(p, half, 0.0, p.Pbar), profile};
  }

  const auto solve_at = [&](double x) {
    const double p2 = hover_strong_power(p, x, profile);
    const double p1 = p.Pbar - p2;
    return HoverSolution{x, p1, p2, sc_rate_pair(p, x, p1, p2), profile};
  };

  const int n = std::max(cfg.grid_points, 3);
  const double step = half / (n - 1);
  HoverSolution best = solve_at(0.0);
  int best_i = 0;
  for (int i = 1; i < n; ++i) {
    HoverSolution s = solve_at(i == n - 1 ? half : i * step);
    if (s.r() > best.r()) {
      best = s;
      best_i = i;
    }
  }
  const double lo = std::max(0.0, (best_i - 1) * step);
  const double hi = std::min(half, (best_i + 1) * step);
  const auto refined = numerics::golden_section_maximize(
      [&](double x) { return solve_at(x).r(); }, lo, hi, cfg.x_tol);
  if (refined.value > best.r()) best = solve_at(refined.x);
  return best;
}

double far_user_snr(const SystemParams& p) {
  return p.Pbar * p.beta0 / (p.D * p.D + p.H * p.H);
}

RegionBoundary region_high_snr(const SystemParams& p,
                               const std::vector<RateProfile>& profiles,
                               const HighSnrConfig& cfg) {
  const double snr = far_user_snr(p);
  if (snr < cfg.hard_floor) {
    std::ostringstream msg;
    msg << "far-user SNR " << snr << " is below the high-SNR floor " << cfg.hard_floor;
    throw OutsideValidity(msg.str());
  }
  RegionBoundary out;
  out.mode = "high-snr";
  if (snr < cfg.warn_below) {
    std::ostringstream msg;
    msg << "far-user SNR " << snr << " is marginal for the high-SNR approximation";
    out.warnings.push_back(msg.str());
  }
  const double sum = std::log2(p.Pbar * p.beta0 / (p.H * p.H));
  const double half = 0.5 * p.D;
  for (const RateProfile& prof : profiles) {
    const double x = prof.alpha2 >= prof.alpha1 ? half : -half;
    out.points.push_back({prof, {prof.alpha1 * sum, prof.alpha2 * sum}, static_hover(p, x)});
  }
  return out;
}

}  // namespace uavbc
