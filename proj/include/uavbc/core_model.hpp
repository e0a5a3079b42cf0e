#pragma once

// Scenario parameters, channel and rate primitives, and the hover-fly-hover
// trajectory shared by every solver in the library.
//
// Units are linear throughout: powers in watts, gains normalized by the noise
// power, positions in metres, times in seconds, rates in bps/Hz. User 1 sits
// at x = -D/2 and user 2 at x = +D/2.

#include <vector>

#include "uavbc/errors.hpp"

namespace uavbc {

enum class User { One = 1, Two = 2 };

inline User other(User u) { return u == User::One ? User::Two : User::One; }

struct SystemParams {
  double gamma0 = 1e-5;  // reference channel power gain at 1 m
  double sigma2 = 1e-13; // noise power (W)
  double H = 100.0;      // altitude (m)
  double D = 1000.0;     // user separation (m)
  double Pbar = 1e-2;    // transmit power budget (W)
  double V = 30.0;       // maximum speed (m/s)
  double T = 60.0;       // flight duration (s)
  double beta0 = 0.0;    // gamma0 / sigma2, filled in by validate_params
};

/// Checks every physical quantity and fills in beta0. Throws InvalidParams
/// naming the first offending field.
SystemParams validate_params(SystemParams raw);

/// The reference scenario: -100 dBm noise, -50 dB reference gain, H = 100 m,
/// D = 1000 m, 10 dBm, V = 30 m/s, T = 60 s.
SystemParams reference_params();

double db_to_linear(double db);
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

double user_position(const SystemParams& p, User u);

/// Normalized gain beta0 / ((x - x_k)^2 + H^2).
double channel_gain(const SystemParams& p, double x, User u);

/// Single-user rate log2(1 + Pbar h_k(x)).
double max_rate(const SystemParams& p, double x, User u);

/// log2(1 + Pbar beta0 / H^2), the rate of a user served alone from directly
/// overhead.
double overhead_rate(const SystemParams& p);

struct RatePair {
  double r1 = 0.0;
  double r2 = 0.0;

  RatePair swapped() const { return {r2, r1}; }
  double sum() const { return r1 + r2; }
};

struct RateProfile {
  double alpha1 = 0.5;
  double alpha2 = 0.5;

  /// Builds (a1, 1 - a1); throws InvalidArgument outside [0, 1].
  static RateProfile from_alpha1(double alpha1);
  RateProfile mirrored() const { return {alpha2, alpha1}; }
};

/// Validates alpha1, alpha2 >= 0 and alpha1 + alpha2 == 1 (within 1e-12).
RateProfile make_profile(double alpha1, double alpha2);

/// Uniform profiles alpha1 = 0, 1/(n-1), ..., 1.
std::vector<RateProfile> uniform_profiles(int n);

/// Hover at x_I for t_I, fly right at speed V to x_F, hover there for t_F.
struct HfhTrajectory {
  double x_I = 0.0;
  double x_F = 0.0;
  double t_I = 0.0;
  double t_F = 0.0;

  bool is_static() const { return x_I == x_F; }
};

/// Builds the trajectory with t_F derived from T. Throws InvalidTrajectory if
/// the result violates the ordering, range or timing constraints.
HfhTrajectory make_hfh(const SystemParams& p, double x_I, double x_F,
                       double t_I);

/// Hover at x for the whole flight.
HfhTrajectory static_hover(const SystemParams& p, double x);

double flight_time(const SystemParams& p, const HfhTrajectory& traj);

void validate_trajectory(const SystemParams& p, const HfhTrajectory& traj);

/// Mirror image x -> -x, time-reversed so that it still runs left to right.
/// Achieves the swapped rate pair of the original.
HfhTrajectory mirror(const HfhTrajectory& traj);

double hfh_position(const HfhTrajectory& traj, const SystemParams& p,
                    double t);

/// Instantaneous superposition-coding rates at a fixed position. The user
/// with the larger gain cancels the other's signal first; on a tie user 2 is
/// treated as the strong user.
RatePair sc_rate_pair(const SystemParams& p, double x, double p1, double p2);

/// Strong user at x under the tie rule above.
User strong_user(const SystemParams& p, double x);

/// Integral over a flight leg from x_a to x_b (speed V) of
/// log2(1 + power * h_u(x(t))) dt, in bps/Hz * s.
double leg_rate_integral(const SystemParams& p, User u, double x_a, double x_b,
                         double power, double rel_tol = 1e-9);

}  // namespace uavbc
