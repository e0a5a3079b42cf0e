#include "uavbc/core_model.hpp"

#include <algorithm>
#include <cmath>

#include "uavbc/numerics.hpp"

namespace uavbc {

namespace {

void require_positive(double v, const char* field) {
  if (!std::isfinite(v) || v <= 0.0) throw InvalidParams(field);
}

// Relative slack for floating-point comparisons on times and positions.
constexpr double kSlack = 1e-9;

}  // namespace

SystemParams validate_params(SystemParams raw) {
  require_positive(raw.gamma0, "gamma0");
  require_positive(raw.sigma2, "sigma2");
  require_positive(raw.H, "H");
  require_positive(raw.D, "D");
  require_positive(raw.Pbar, "Pbar");
  if (!std::isfinite(raw.V) || raw.V < 0.0) throw InvalidParams("V");
  require_positive(raw.T, "T");
  raw.beta0 = raw.gamma0 / raw.sigma2;
  return raw;
}

SystemParams reference_params() {
  SystemParams p;
  p.gamma0 = db_to_linear(-50.0);
  p.sigma2 = dbm_to_watts(-100.0);
  p.H = 100.0;
  p.D = 1000.0;
  p.Pbar = dbm_to_watts(10.0);
  p.V = 30.0;
  p.T = 60.0;
  return validate_params(p);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double user_position(const SystemParams& p, User u) {
  return u == User::One ? -0.5 * p.D : 0.5 * p.D;
}

double channel_gain(const SystemParams& p, double x, User u) {
  const double dx = x - user_position(p, u);
  return p.beta0 / (dx * dx + p.H * p.H);
}

double max_rate(const SystemParams& p, double x, User u) {
  return std::log2(1.0 + p.Pbar * channel_gain(p, x, u));
}

double overhead_rate(const SystemParams& p) {
  return std::log2(1.0 + p.Pbar * p.beta0 / (p.H * p.H));
}

RateProfile RateProfile::from_alpha1(double alpha1) {
  return make_profile(alpha1, 1.0 - alpha1);
}

RateProfile make_profile(double alpha1, double alpha2) {
  if (!(alpha1 >= 0.0) || !(alpha2 >= 0.0) ||
      std::abs(alpha1 + alpha2 - 1.0) > 1e-12) {
    throw InvalidArgument("rate profile must be nonnegative and sum to 1");
  }
  return {alpha1, alpha2};
}

std::vector<RateProfile> uniform_profiles(int n) {
  if (n < 2) throw InvalidArgument("need at least two profiles");
  std::vector<RateProfile> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Exact endpoints and exact symmetry alpha(i) + alpha(n-1-i) == 1.
    const double a1 = static_cast<double>(i) / static_cast<double>(n - 1);
    const double a2 = static_cast<double>(n - 1 - i) / static_cast<double>(n - 1);
    out.push_back({a1, a2});
  }
  return out;
}

double flight_time(const SystemParams& p, const HfhTrajectory& traj) {
  if (traj.x_F == traj.x_I) return 0.0;
  return (traj.x_F - traj.x_I) / p.V;
}

void validate_trajectory(const SystemParams& p, const HfhTrajectory& traj) {
  const double half = 0.5 * p.D;
  const double xtol = kSlack * p.D;
  const double ttol = kSlack * p.T;
  if (!(traj.x_I >= -half - xtol) || !(traj.x_F <= half + xtol)) {
    throw InvalidTrajectory("hover positions must lie within [-D/2, D/2]");
  }
  if (traj.x_I > traj.x_F) {
    throw InvalidTrajectory("trajectory must run left to right (x_I <= x_F)");
  }
  if (traj.t_I < -ttol || traj.t_F < -ttol) {
    throw InvalidTrajectory("hover times must be nonnegative");
  }
  if (p.V == 0.0 && traj.x_I != traj.x_F) {
    throw InvalidTrajectory("zero speed admits only a single hover point");
  }
  const double total = traj.t_I + flight_time(p, traj) + traj.t_F;
  if (std::abs(total - p.T) > ttol) {
    throw InvalidTrajectory("hover and flight times must add up to T");
  }
}

HfhTrajectory make_hfh(const SystemParams& p, double x_I, double x_F,
                       double t_I) {
  HfhTrajectory traj{x_I, x_F, t_I, 0.0};
  if (p.V == 0.0 && x_I != x_F) {
    throw InvalidTrajectory("zero speed admits only a single hover point");
  }
  traj.t_F = p.T - t_I - flight_time(p, traj);
  if (traj.t_F < 0.0 && traj.t_F > -kSlack * p.T) traj.t_F = 0.0;
  validate_trajectory(p, traj);
  return traj;
}

HfhTrajectory static_hover(const SystemParams& p, double x) {
  return make_hfh(p, x, x, p.T);
}

HfhTrajectory mirror(const HfhTrajectory& traj) {
  return {-traj.x_F, -traj.x_I, traj.t_F, traj.t_I};
}

double hfh_position(const HfhTrajectory& traj, const SystemParams& p,
                    double t) {
  const double ttol = kSlack * p.T;
  if (!(t >= -ttol) || !(t <= p.T + ttol)) {
    throw TimeOutOfRange("time outside [0, T]");
  }
  if (t <= traj.t_I || traj.x_I == traj.x_F) return traj.x_I;
  if (t >= p.T - traj.t_F) return traj.x_F;
  return std::min(traj.x_I + (t - traj.t_I) * p.V, traj.x_F);
}

User strong_user(const SystemParams& p, double x) {
  return channel_gain(p, x, User::One) > channel_gain(p, x, User::Two)
             ? User::One
             : User::Two;
}

RatePair sc_rate_pair(const SystemParams& p, double x, double p1, double p2) {
  if (!(p1 >= 0.0) || !(p2 >= 0.0)) {
    throw PowerBudgetExceeded("powers must be nonnegative");
  }
  if (p1 + p2 > p.Pbar * (1.0 + 1e-12)) {
    throw PowerBudgetExceeded("p1 + p2 exceeds Pbar");
  }
  const double h1 = channel_gain(p, x, User::One);
  const double h2 = channel_gain(p, x, User::Two);
  if (h1 > h2) {
    return {std::log2(1.0 + p1 * h1), std::log2(1.0 + p2 * h2 / (p1 * h2 + 1.0))};
  }
  return {std::log2(1.0 + p1 * h1 / (p2 * h1 + 1.0)), std::log2(1.0 + p2 * h2)};
}

double leg_rate_integral(const SystemParams& p, User u, double x_a, double x_b,
                         double power, double rel_tol) {
  if (x_a > x_b) throw InvalidArgument("leg must satisfy x_a <= x_b");
  if (x_a == x_b || power == 0.0) return 0.0;
  if (p.V == 0.0) throw ZeroSpeedLeg("cannot fly a leg at zero speed");
  const auto integrand = [&](double x) {
    return std::log2(1.0 + power * channel_gain(p, x, u));
  };
  // Substituting t = (x - x_a) / V turns the time integral into a position
  // integral scaled by 1/V.
  const double scale = std::log2(1.0 + power * p.beta0 / (p.H * p.H)) * (x_b - x_a);
  const double tol = rel_tol * std::max(scale, 1e-300);
  return numerics::adaptive_simpson(integrand, x_a, x_b, tol) / p.V;
}

}  // namespace uavbc
