#include "uavbc/fixed_region.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "uavbc/numerics.hpp"

namespace uavbc {

namespace {

struct Gains {
  double h1;
  double h2;
};

Gains gains_at(const SystemParams& p, double x) {
  return {channel_gain(p, x, User::One), channel_gain(p, x, User::Two)};
}

FixedBoundaryPoint point_from_user_powers(const SystemParams& p, double x,
                                          double p1, double p2) {
  return {x, p1, p2, sc_rate_pair(p, x, p1, p2)};
}

// d r_k / d p_s (times ln 2) along the boundary, where p_s is the strong
// user's power and the weak user gets Pbar - p_s.
struct BoundaryDerivative {
  double d_r1;
  double d_r2;
};

BoundaryDerivative boundary_derivative(const Gains& g,
                                       User strong, double ps) {
  if (strong == User::Two) {
    return {-g.h1 / (1.0 + ps * g.h1), g.h2 / (1.0 + ps * g.h2)};
  }
  return {g.h1 / (1.0 + ps * g.h1), -g.h2 / (1.0 + ps * g.h2)};
}

double weighted(const RatePair& r, double mu) { return mu * r.r1 + (1.0 - mu) * r.r2; }

RatePair intersection_same_side(const SystemParams& p, double xB, double xC) {
  // Both positions on user 2's side: user 2 is strong at both, and equating
  // r2^B(r1) = r2^C(r1) is linear in w = 2^r1.
  const Gains b = gains_at(p, xB);
  const Gains c = gains_at(p, xC);
  const double w = p.Pbar * b.h1 * c.h1 * (b.h2 - c.h2) / (b.h2 * c.h1 - b.h1 * c.h2) + 1.0;
  const double r1 = std::log2(w);
  return {r1, boundary_r2_at(p, xB, r1)};
}

RatePair intersection_straddling(const SystemParams& p, double xB, double xC) {
  // User 2 is strong at xB and user 1 is strong at xC. With w = 2^r1:
  //   2^{r2^B} = 1 + (Pbar h1B + 1 - w) h2B / (w h1B)
  //   2^{r2^C} = (Pbar h2C + 1) h1C / ((w - 1) h2C + h1C)
  // Clearing denominators gives a w^2 + b w + c = 0 with a > 0 and c < 0, so
  // exactly one positive root.
  const Gains B = gains_at(p, xB);
  const Gains C = gains_at(p, xC);
  const double slope_b = B.h2 / B.h1 - 1.0;
  const double k = (p.Pbar * B.h1 + 1.0) * B.h2 / B.h1;
  const double m = (p.Pbar * C.h2 + 1.0) * C.h1;
  const double qa = slope_b * C.h2;
  const double qb = m - k * C.h2 + slope_b * (C.h1 - C.h2);
  const double qc = -k * (C.h1 - C.h2);
  const double disc = std::sqrt(qb * qb - 4.0 * qa * qc);
  // Cancellation-free pair of roots.
  const double q = -0.5 * (qb + std::copysign(disc, qb));
  const double roots[2] = {q / qa, qc / q};

  auto r2_gap = [&](double w) {
    const double r1 = std::log2(w);
    return boundary_r2_at(p, xB, r1) - boundary_r2_at(p, xC, r1);
  };
  double w = 0.0;
  int candidates = 0;
  for (double root : roots) {
    if (root > 1.0) {
      ++candidates;
      if (candidates == 1 || std::abs(r2_gap(root)) < std::abs(r2_gap(w))) w = root;
    }
  }
  if (candidates == 0) throw NoSignChange("no intersection root above 1");
  const double r1 = std::log2(w);
  return {r1, boundary_r2_at(p, xB, r1)};
}

void require_ordered(const SystemParams& p, double xB, double xC) {
  const double half = 0.5 * p.D;
  if (xB == xC) throw DegenerateLocations("xB and xC coincide");
  if (xC > xB) throw InvalidArgument("expected xC < xB");
  if (xC < -half || xB > half) throw InvalidArgument("locations outside [-D/2, D/2]");
}

// mu * r1 + (1 - mu) * r2 maximized over C_f(x).
double support_value(const SystemParams& p, double x, double mu) {
  return weighted(support_point(p, x, mu).rate_pair, mu);
}

}  // namespace

FixedBoundaryPoint boundary_at_strong_power(const SystemParams& p, double x,
                                            double strong_power) {
  const double ps = std::clamp(strong_power, 0.0, p.Pbar);
  const double pw = p.Pbar - ps;
  return strong_user(p, x) == User::Two ? point_from_user_powers(p, x, pw, ps)
                                        : point_from_user_powers(p, x, ps, pw);
}

FixedBoundaryPoint fixed_boundary(const SystemParams& p, double x,
                                  const RateProfile& profile) {
  if (profile.alpha2 == 0.0) return point_from_user_powers(p, x, p.Pbar, 0.0);
  if (profile.alpha1 == 0.0) return point_from_user_powers(p, x, 0.0, p.Pbar);
  const User strong = strong_user(p, x);
  const double a_strong = strong == User::One ? profile.alpha1 : profile.alpha2;
  const double a_weak = strong == User::One ? profile.alpha2 : profile.alpha1;
  // a_weak * r_strong - a_strong * r_weak rises with the strong user's power.
  const auto gap = [&](double ps) {
    const FixedBoundaryPoint pt = boundary_at_strong_power(p, x, ps);
    const double r_strong = strong == User::One ? pt.rate_pair.r1 : pt.rate_pair.r2;
    const double r_weak = strong == User::One ? pt.rate_pair.r2 : pt.rate_pair.r1;
    return a_weak * r_strong - a_strong * r_weak;
  };
  const double ps = numerics::bisect_increasing(gap, 0.0, p.Pbar);
  return boundary_at_strong_power(p, x, ps);
}

std::vector<FixedBoundaryPoint> fixed_region_sample(const SystemParams& p,
                                                    double x, int n) {
  std::vector<FixedBoundaryPoint> out;
  for (const RateProfile& prof : uniform_profiles(n)) {
    out.push_back(fixed_boundary(p, x, prof));
  }
  return out;
}

FixedBoundaryPoint support_point(const SystemParams& p, double x, double mu) {
  const Gains g = gains_at(p, x);
  const User strong = strong_user(p, x);
  // Derivative of the weighted objective in the strong user's power; its
  // numerator is affine in p_s so the sign changes at most once.
  const auto slope_sign = [&](double ps) {
    const BoundaryDerivative d = boundary_derivative(g, strong, ps);
    return mu * d.d_r1 + (1.0 - mu) * d.d_r2;
  };
  const double at_zero = slope_sign(0.0);
  const double at_full = slope_sign(p.Pbar);
  double ps;
  if (at_zero <= 0.0 && at_full <= 0.0) {
    ps = (at_zero == 0.0 && at_full == 0.0) ? p.Pbar : 0.0;
  } else if (at_zero >= 0.0 && at_full >= 0.0) {
    ps = p.Pbar;
  } else {
    // Concave along the boundary: the derivative falls from + to -.
    ps = numerics::bisect_increasing([&](double s) { return -slope_sign(s); }, 0.0,
                                     p.Pbar);
  }
  return boundary_at_strong_power(p, x, ps);
}

double boundary_r2_at(const SystemParams& p, double x, double r1) {
  const Gains g = gains_at(p, x);
  const double w = std::exp2(r1);
  if (strong_user(p, x) == User::Two) {
    // r1 = log2((1 + Pbar h1) / (1 + ps h1))
    const double ps = std::clamp(((1.0 + p.Pbar * g.h1) / w - 1.0) / g.h1, 0.0, p.Pbar);
    return std::log2(1.0 + ps * g.h2);
  }
  // r1 = log2(1 + ps h1)
  const double ps = std::clamp((w - 1.0) / g.h1, 0.0, p.Pbar);
  return std::log2((1.0 + p.Pbar * g.h2) / (1.0 + ps * g.h2));
}

RatePair intersection_point(const SystemParams& p, double xB, double xC) {
  require_ordered(p, xB, xC);
  if (xC >= 0.0) return intersection_same_side(p, xB, xC);
  if (xB <= 0.0) {
    // Mirror image of the same-side case with the users swapped.
    return intersection_same_side(p, -xC, -xB).swapped();
  }
  return intersection_straddling(p, xB, xC);
}

TangentLine common_tangent(const SystemParams& p, double xB, double xC) {
  require_ordered(p, xB, xC);
  // B dominates the support function for weights favouring r2 and C for
  // weights favouring r1; the tangent slope is where they tie.
  const auto gap = [&](double mu) {
    return support_value(p, xC, mu) - support_value(p, xB, mu);
  };
  const double mu = numerics::bisect_increasing(gap, 0.0, 1.0);
  TangentLine line;
  line.touch_B = support_point(p, xB, mu).rate_pair;
  line.touch_C = support_point(p, xC, mu).rate_pair;
  const double dr1 = line.touch_B.r1 - line.touch_C.r1;
  line.slope = dr1 != 0.0 ? (line.touch_B.r2 - line.touch_C.r2) / dr1 : -mu / (1.0 - mu);
  return line;
}

bool triangle_contains(const SystemParams& p, double xI, double xF, double x,
                       int n_samples) {
  if (!(xI <= x && x <= xF)) throw InvalidArgument("expected xI <= x <= xF");
  if (xI == xF) return true;
  const TangentLine line = common_tangent(p, xF, xI);
  const double tol = 1e-9 * std::max(1.0, overhead_rate(p));
  for (const FixedBoundaryPoint& pt : fixed_region_sample(p, x, n_samples)) {
    if (pt.rate_pair.r2 > line.r2_at(pt.rate_pair.r1) + tol) return false;
  }
  return true;
}

}  // namespace uavbc
