#pragma once

// Small scalar routines shared by the solvers: adaptive Simpson quadrature,
// golden-section maximization and bisection on monotone functions.

#include <array>
#include <cmath>
#include <utility>

namespace uavbc::numerics {

namespace detail {

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance
/// `abs_tol`, recursing at most `max_depth` levels.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol,
                        int max_depth = 40) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

struct GoldenResult {
  double x;
  double value;
};

/// Golden-section search for a maximum of f on [a, b]. The returned point is
/// the best one evaluated; for unimodal f it is within `x_tol` of the argmax.
template <class F>
GoldenResult golden_section_maximize(F&& f, double a, double b, double x_tol,
                                     int max_iter = 200) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? GoldenResult{c, fc} : GoldenResult{d, fd};
}

/// Root of a nondecreasing function g on [lo, hi] by bisection. Assumes
/// g(lo) <= 0 <= g(hi); returns the bracket midpoint after `iterations`
/// halvings or once the bracket stops shrinking.
template <class G>
double bisect_increasing(G&& g, double lo, double hi, int iterations = 200) {
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Three-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<std::pair<double, double>, 3> kGauss3 = {{
    {-0.7745966692414834, 5.0 / 9.0},
    {0.0, 8.0 / 9.0},
    {0.7745966692414834, 5.0 / 9.0},
}};

}  // namespace uavbc::numerics
