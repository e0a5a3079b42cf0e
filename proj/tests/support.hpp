#pragma once

// Small reference computations shared by the unit tests. They deliberately
// avoid the library's own numerics so they can serve as independent checks.

#include <cmath>
#include <functional>
#include <random>

#include "uavbc/core_model.hpp"

namespace testing {

inline uavbc::SystemParams ref() { return uavbc::reference_params(); }

inline uavbc::SystemParams with(uavbc::SystemParams p, double V, double T) {
  p.V = V;
  p.T = T;
  return uavbc::validate_params(p);
}

inline uavbc::SystemParams with_power_dbm(uavbc::SystemParams p, double dbm) {
  p.Pbar = std::pow(10.0, (dbm - 30.0) / 10.0);
  return uavbc::validate_params(p);
}

// Gain from the textbook formula, without the library.
inline double gain(const uavbc::SystemParams& p, double x, int user) {
  const double xk = user == 1 ? -0.5 * p.D : 0.5 * p.D;
  return p.gamma0 / p.sigma2 / ((x - xk) * (x - xk) + p.H * p.H);
}

// Superposition rates written out directly: the user with the larger gain
// decodes last, interference-free.
inline uavbc::RatePair sc_pair(const uavbc::SystemParams& p, double x, double p1, double p2) {
  const double h1 = gain(p, x, 1);
  const double h2 = gain(p, x, 2);
  if (h2 >= h1) return {std::log2(1.0 + p1 * h1 / (1.0 + p2 * h1)), std::log2(1.0 + p2 * h2)};
  return {std::log2(1.0 + p1 * h1), std::log2(1.0 + p2 * h2 / (1.0 + p1 * h2))};
}

inline double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double acc = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) acc += f(a + i * h);
  return acc * h;
}

// Weighted-rate maximizer over a uniform grid of user-1 powers.
inline double grid_best_p1(const uavbc::SystemParams& p, double x, double mu, int n) {
  double best = -1.0;
  double arg = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double p1 = p.Pbar * i / n;
    const uavbc::RatePair r = sc_pair(p, x, p1, p.Pbar - p1);
    const double v = mu * r.r1 + (1.0 - mu) * r.r2;
    if (v > best) {
      best = v;
      arg = p1;
    }
  }
  return arg;
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng());
}

}  // namespace testing
