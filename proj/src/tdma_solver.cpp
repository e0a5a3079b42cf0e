#include "uavbc/tdma_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "uavbc/numerics.hpp"
#include "uavbc/parallel.hpp"

namespace uavbc {

std::string to_string(TdmaFamily f) {
  switch (f) {
    case TdmaFamily::Corner: return "corner";
    case TdmaFamily::Fixed: return "fixed";
    case TdmaFamily::PureFlight: return "pure-flight";
    case TdmaFamily::HoverLeft: return "hover-left";
    case TdmaFamily::HoverRight: return "hover-right";
    case TdmaFamily::HoverBoth: return "hover-both";
  }
  return "unknown";
}

namespace {

int index_of(User u) { return u == User::One ? 0 : 1; }

// Full-power rate-seconds accumulated along one trajectory. The complete
// flight-leg integrals are computed once per user; partial legs are
// integrated on demand.
class Timeline {
 public:
  Timeline(const SystemParams& p, const HfhTrajectory& tr)
      : p_(p), tr_(tr), fly_start_(tr.t_I), fly_end_(p.T - tr.t_F) {
    for (User u : {User::One, User::Two}) {
      const int k = index_of(u);
      hover_I_[k] = max_rate(p, tr.x_I, u);
      hover_F_[k] = max_rate(p, tr.x_F, u);
      leg_[k] = tr.is_static() ? 0.0 : leg_rate_integral(p, u, tr.x_I, tr.x_F, p.Pbar);
    }
  }

  double cumulative(User u, double t) const {
    const int k = index_of(u);
    double acc = std::min(t, fly_start_) * hover_I_[k];
    if (t > fly_start_ && !tr_.is_static()) {
      if (t >= fly_end_) {
        acc += leg_[k];
      } else {
        const double x = std::min(tr_.x_F, tr_.x_I + (t - fly_start_) * p_.V);
        acc += leg_rate_integral(p_, u, tr_.x_I, x, p_.Pbar);
      }
    }
    if (t > fly_end_) acc += (t - std::max(fly_end_, fly_start_)) * hover_F_[k];
    return acc;
  }

  double total(User u) const { return cumulative(u, p_.T); }

 private:
  const SystemParams& p_;
  HfhTrajectory tr_;
  double fly_start_;
  double fly_end_;
  double hover_I_[2]{};
  double hover_F_[2]{};
  double leg_[2]{};
};

double scale_of(const RatePair& r, const RateProfile& prof) {
  double out = std::numeric_limits<double>::infinity();
  if (prof.alpha1 > 0.0) out = std::min(out, r.r1 / prof.alpha1);
  if (prof.alpha2 > 0.0) out = std::min(out, r.r2 / prof.alpha2);
  return out;
}

double t1_on(const SystemParams& p, const Timeline& tl, const RateProfile& prof,
             double rel_tol) {
  if (prof.alpha1 == 0.0) return 0.0;
  if (prof.alpha2 == 0.0) return p.T;
  const double total2 = tl.total(User::Two);
  const auto gap = [&](double t) {
    return tl.cumulative(User::One, t) / prof.alpha1 -
           (total2 - tl.cumulative(User::Two, t)) / prof.alpha2;
  };
  const int iterations = static_cast<int>(std::ceil(std::log2(1.0 / rel_tol))) + 1;
  return numerics::bisect_increasing(gap, 0.0, p.T, iterations);
}

TdmaSolution evaluate(const SystemParams& p, const RateProfile& prof,
                      const HfhTrajectory& tr, TdmaFamily fam, double rel_tol) {
  const Timeline tl(p, tr);
  TdmaSolution s;
  s.profile = prof;
  s.trajectory = tr;
  s.t1 = t1_on(p, tl, prof, rel_tol);
  s.rate_pair = {tl.cumulative(User::One, s.t1) / p.T,
                 (tl.total(User::Two) - tl.cumulative(User::Two, s.t1)) / p.T};
  s.r = scale_of(s.rate_pair, prof);
  s.diagnostics.family = fam;
  return s;
}

struct Family {
  TdmaFamily id;
  double lo;
  double hi;
  int points;
  std::function<HfhTrajectory(double)> build;
};

std::vector<Family> families(const SystemParams& p, const TdmaSearchConfig& cfg) {
  const double half = 0.5 * p.D;
  std::vector<Family> out;
  if (p.V == 0.0) {
    out.push_back({TdmaFamily::Fixed, -half, half, cfg.grid_points,
                   [&p](double x) { return static_hover(p, x); }});
    return out;
  }
  const double reach = p.V * p.T;
  const double cross = p.D / p.V;  // time to fly between the users
  if (reach < p.D) {
    out.push_back({TdmaFamily::PureFlight, -half, half - reach, cfg.grid_points,
                   [&p, reach, half](double xi) {
                     const double x = std::min(xi, half - reach);
                     return make_hfh(p, x, x + reach, 0.0);
                   }});
  }
  const double t_min = std::max(0.0, p.T - cross);
  out.push_back({TdmaFamily::HoverLeft, t_min, p.T, cfg.grid_points,
                 [&p, half](double ti) {
                   const double xf = std::min(half, -half + p.V * (p.T - ti));
                   return make_hfh(p, -half, xf, ti);
                 }});
  out.push_back({TdmaFamily::HoverRight, t_min, p.T, cfg.grid_points,
                 [&p, half](double tf) {
                   const double xi = std::max(-half, half - p.V * (p.T - tf));
                   return make_hfh(p, xi, half, 0.0);
                 }});
  if (reach >= p.D) {
    out.push_back({TdmaFamily::HoverBoth, 0.0, p.T - cross, cfg.hover_split_points,
                   [&p, half](double ti) { return make_hfh(p, -half, half, ti); }});
  }
  return out;
}

}  // namespace

RatePair tdma_rates(const SystemParams& p, const HfhTrajectory& traj, double t1) {
  if (!(t1 >= 0.0 && t1 <= p.T)) throw TimeOutOfRange("t1 outside [0, T]");
  validate_trajectory(p, traj);
  const Timeline tl(p, traj);
  return {tl.cumulative(User::One, t1) / p.T,
          (tl.total(User::Two) - tl.cumulative(User::Two, t1)) / p.T};
}

double solve_t1(const SystemParams& p, const HfhTrajectory& traj,
                const RateProfile& profile, const TdmaSearchConfig& cfg) {
  validate_trajectory(p, traj);
  return t1_on(p, Timeline(p, traj), profile, cfg.t1_rel_tol);
}

TdmaSolution mirror_solution(const SystemParams& p, const TdmaSolution& s) {
  TdmaSolution m = s;
  m.profile = s.profile.mirrored();
  m.rate_pair = s.rate_pair.swapped();
  m.trajectory = mirror(s.trajectory);
  m.t1 = p.T - s.t1;
  return m;
}

TdmaSolution tdma_solve_profile(const SystemParams& p, const RateProfile& profile,
                                const TdmaSearchConfig& cfg) {
  if (profile.alpha1 > profile.alpha2) {
    TdmaSolution m = mirror_solution(p, tdma_solve_profile(p, profile.mirrored(), cfg));
    m.profile = profile;
    return m;
  }
  if (profile.alpha1 == 0.0) {
    TdmaSolution s = evaluate(p, profile, static_hover(p, 0.5 * p.D), TdmaFamily::Corner,
                              cfg.t1_rel_tol);
    s.diagnostics.candidates = 1;
    s.diagnostics.grid_best_r = s.r;
    return s;
  }

  struct Candidate {
    std::size_t family;
    double s;
  };
  const std::vector<Family> fams = families(p, cfg);
  std::vector<Candidate> grid;
  for (std::size_t f = 0; f < fams.size(); ++f) {
    const Family& fam = fams[f];
    const int n = fam.hi > fam.lo ? std::max(fam.points, 2) : 1;
    for (int i = 0; i < n; ++i) {
      const double s = n == 1 ? fam.lo : (i == n - 1 ? fam.hi : fam.lo + (fam.hi - fam.lo) * i / (n - 1));
      grid.push_back({f, s});
    }
  }
  std::vector<TdmaSolution> scored(grid.size());
  parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
    const Family& fam = fams[grid[i].family];
    scored[i] = evaluate(p, profile, fam.build(grid[i].s), fam.id, cfg.t1_rel_tol);
  });
  std::size_t best_i = 0;
  for (std::size_t i = 1; i < scored.size(); ++i) {
    if (scored[i].r > scored[best_i].r) best_i = i;
  }
  TdmaSolution best = scored[best_i];
  const double grid_best = best.r;

  const Family& fam = fams[grid[best_i].family];
  if (fam.hi > fam.lo) {
    const double step = (fam.hi - fam.lo) / (std::max(fam.points, 2) - 1);
    const double lo = std::max(fam.lo, grid[best_i].s - step);
    const double hi = std::min(fam.hi, grid[best_i].s + step);
    const auto g = numerics::golden_section_maximize(
        [&](double s) { return evaluate(p, profile, fam.build(s), fam.id, cfg.t1_rel_tol).r; },
        lo, hi, 0.0, cfg.golden_iters);
    if (g.value > best.r) best = evaluate(p, profile, fam.build(g.x), fam.id, cfg.t1_rel_tol);
  }
  best.diagnostics.candidates = static_cast<int>(grid.size());
  best.diagnostics.grid_best_r = grid_best;
  return best;
}

TdmaRegionTrace tdma_trace_region(const SystemParams& p, int n_profiles,
                                  const TdmaSearchConfig& cfg) {
  const std::vector<RateProfile> profiles = uniform_profiles(n_profiles);
  const std::size_t n = profiles.size();
  std::vector<TdmaSolution> sols(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (profiles[i].alpha2 >= profiles[i].alpha1) sols[i] = tdma_solve_profile(p, profiles[i], cfg);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (profiles[i].alpha2 < profiles[i].alpha1) {
      sols[i] = mirror_solution(p, sols[n - 1 - i]);
      sols[i].profile = profiles[i];
    }
  }
  TdmaRegionTrace out;
  out.boundary.mode = "tdma";
  for (const TdmaSolution& s : sols) {
    out.boundary.points.push_back({s.profile, s.rate_pair, s.trajectory});
  }
  out.solutions = std::move(sols);
  return out;
}

}  // namespace uavbc
