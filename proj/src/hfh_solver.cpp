#include "uavbc/hfh_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "uavbc/numerics.hpp"
#include "uavbc/parallel.hpp"

namespace uavbc {

namespace {

// A quadrature node inside a slot: normalized gains and weight in seconds.
struct Node {
  double h1;
  double h2;
  double w;
  bool operator==(const Node&) const = default;
};

// A run of consecutive slots sharing the split position and the nodes.
struct SlotGroup {
  double h1 = 0.0;
  double h2 = 0.0;
  int count = 0;
  std::vector<Node> nodes;
};

RatePair node_rates(const Node& n, double p1, double p2) {
  if (n.h1 > n.h2) {
    return {std::log2(1.0 + p1 * n.h1), std::log2(1.0 + p2 * n.h2 / (p1 * n.h2 + 1.0))};
  }
  return {std::log2(1.0 + p1 * n.h1 / (p2 * n.h1 + 1.0)), std::log2(1.0 + p2 * n.h2)};
}

// Rate-seconds collected by one slot of the group.
RatePair slot_rates(const SlotGroup& g, const SlotPower& s) {
  RatePair acc;
  for (const Node& n : g.nodes) {
    const RatePair r = node_rates(n, s.p1, s.p2);
    acc.r1 += n.w * r.r1;
    acc.r2 += n.w * r.r2;
  }
  return acc;
}

SlotPower split_from_gains(double h1, double h2, double pbar, double mu) {
  const bool one_strong = h1 > h2;
  const double hs = one_strong ? h1 : h2;
  const double hw = one_strong ? h2 : h1;
  const double mus = one_strong ? mu : 1.0 - mu;
  const double muw = 1.0 - mus;
  double ps = pbar;
  if (mus < muw) {
    const double n0 = mus * hs - muw * hw;
    ps = n0 <= 0.0 ? 0.0 : std::min(pbar, n0 / (hs * hw * (muw - mus)));
  }
  const double pw = pbar - ps;
  return one_strong ? SlotPower{ps, pw} : SlotPower{pw, ps};
}

std::vector<Node> slot_nodes(const SystemParams& p, const DiscretizedTrajectory& d,
                             std::size_t n) {
  const auto gains_at = [&](double x, double w) {
    return Node{channel_gain(p, x, User::One), channel_gain(p, x, User::Two), w};
  };
  if (!d.source || d.source->is_static()) {
    return {gains_at(d.positions[n], d.slot_duration)};
  }
  const HfhTrajectory& tr = *d.source;
  const double a = static_cast<double>(n) * d.slot_duration;
  const double b = a + d.slot_duration;
  const double fly_start = tr.t_I;
  const double fly_end = p.T - tr.t_F;
  std::vector<double> cuts{a};
  for (double c : {fly_start, fly_end}) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());

  std::vector<Node> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    if (hi <= lo) continue;
    const double mid = 0.5 * (lo + hi);
    if (mid <= fly_start) {
      out.push_back(gains_at(tr.x_I, hi - lo));
    } else if (mid >= fly_end) {
      out.push_back(gains_at(tr.x_F, hi - lo));
    } else {
      const double half = 0.5 * (hi - lo);
      for (const auto& [xi, wi] : numerics::kGauss3) {
        const double t = mid + half * xi;
        const double x = std::clamp(tr.x_I + (t - fly_start) * p.V, tr.x_I, tr.x_F);
        out.push_back(gains_at(x, half * wi));
      }
    }
  }
  return out;
}

std::vector<SlotGroup> build_groups(const SystemParams& p, const DiscretizedTrajectory& d) {
  std::vector<SlotGroup> groups;
  for (std::size_t n = 0; n < d.positions.size(); ++n) {
    const double x = d.positions[n];
    const double h1 = channel_gain(p, x, User::One);
    const double h2 = channel_gain(p, x, User::Two);
    std::vector<Node> nodes = slot_nodes(p, d, n);
    if (!groups.empty() && groups.back().h1 == h1 && groups.back().h2 == h2 &&
        groups.back().nodes == nodes) {
      ++groups.back().count;
      continue;
    }
    groups.push_back({h1, h2, 1, std::move(nodes)});
  }
  return groups;
}

struct Evaluation {
  std::vector<SlotPower> split;  // per group
  std::vector<RatePair> rates;   // per slot of each group, rate-seconds
  RatePair total;                // rate-seconds
};

Evaluation evaluate(const std::vector<SlotGroup>& groups, double pbar, double mu) {
  Evaluation e;
  e.split.reserve(groups.size());
  e.rates.reserve(groups.size());
  for (const SlotGroup& g : groups) {
    const SlotPower s = split_from_gains(g.h1, g.h2, pbar, mu);
    const RatePair r = slot_rates(g, s);
    e.split.push_back(s);
    e.rates.push_back(r);
    e.total.r1 += g.count * r.r1;
    e.total.r2 += g.count * r.r2;
  }
  return e;
}

double profile_gap(const RatePair& r, const RateProfile& prof) {
  return r.r1 / prof.alpha1 - r.r2 / prof.alpha2;
}

double profile_scale(const RatePair& r, const RateProfile& prof) {
  double out = std::numeric_limits<double>::infinity();
  if (prof.alpha1 > 0.0) out = std::min(out, r.r1 / prof.alpha1);
  if (prof.alpha2 > 0.0) out = std::min(out, r.r2 / prof.alpha2);
  return out;
}

PowerAllocation finish(const std::vector<SlotGroup>& groups, std::vector<SlotPower> per_slot,
                RatePair total, double duration, double slot_duration,
                const RateProfile& prof) {
  PowerAllocation out;
  out.schedule.slot_duration = slot_duration;
  out.schedule.slots = std::move(per_slot);
  out.rate_pair = {total.r1 / duration, total.r2 / duration};
  out.r = profile_scale(out.rate_pair, prof);
  (void)groups;
  return out;
}

std::vector<SlotPower> expand(const std::vector<SlotGroup>& groups,
                              const std::vector<SlotPower>& split) {
  std::vector<SlotPower> out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    out.insert(out.end(), static_cast<std::size_t>(groups[g].count), split[g]);
  }
  return out;
}

// Moves slots from the `lo` split to the `hi` split in time order until the
// profile ratio is met, interpolating the power in the crossing slot.
PowerAllocation mix(const std::vector<SlotGroup>& groups, const Evaluation& lo,
             const Evaluation& hi, double duration, double slot_duration,
             const RateProfile& prof) {
  RatePair total = lo.total;
  std::vector<SlotPower> slots;
  slots.reserve(static_cast<std::size_t>(
      std::max<double>(0.0, duration / slot_duration + 1.0)));
  bool done = profile_gap(total, prof) >= 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const SlotGroup& grp = groups[g];
    if (done) {
      slots.insert(slots.end(), static_cast<std::size_t>(grp.count), lo.split[g]);
      continue;
    }
    const RatePair a = lo.rates[g];
    const RatePair b = hi.rates[g];
    const double step = (b.r1 - a.r1) / prof.alpha1 - (b.r2 - a.r2) / prof.alpha2;
    const double gap = profile_gap(total, prof);
    int whole = grp.count;
    if (step > 0.0) {
      whole = static_cast<int>(std::min<double>(grp.count, std::floor(-gap / step)));
      whole = std::max(whole, 0);
    }
    total.r1 += whole * (b.r1 - a.r1);
    total.r2 += whole * (b.r2 - a.r2);
    slots.insert(slots.end(), static_cast<std::size_t>(whole), hi.split[g]);
    if (whole == grp.count) continue;

    // Partial slot: interpolate the powers so the ratio is met exactly.
    const SlotPower& sl = lo.split[g];
    const SlotPower& sh = hi.split[g];
    const auto blend = [&](double th) {
      return SlotPower{sl.p1 + th * (sh.p1 - sl.p1), sl.p2 + th * (sh.p2 - sl.p2)};
    };
    const auto gap_at = [&](double th) {
      const RatePair r = slot_rates(grp, blend(th));
      return profile_gap({total.r1 - a.r1 + r.r1, total.r2 - a.r2 + r.r2}, prof);
    };
    const double th = numerics::bisect_increasing(gap_at, 0.0, 1.0, 100);
    const RatePair r = slot_rates(grp, blend(th));
    total.r1 += r.r1 - a.r1;
    total.r2 += r.r2 - a.r2;
    slots.push_back(blend(th));
    slots.insert(slots.end(), static_cast<std::size_t>(grp.count - whole - 1), lo.split[g]);
    done = true;
  }
  return finish(groups, std::move(slots), total, duration, slot_duration, prof);
}

}  // namespace

DiscretizedTrajectory discretize(const SystemParams& p, const HfhTrajectory& traj,
                                 int n_slots) {
  if (n_slots < 1) throw DiscretizationInvalid("need at least one slot");
  validate_trajectory(p, traj);
  DiscretizedTrajectory d;
  d.slot_duration = p.T / n_slots;
  d.source = traj;
  d.positions.reserve(static_cast<std::size_t>(n_slots));
  for (int n = 0; n < n_slots; ++n) {
    d.positions.push_back(hfh_position(traj, p, (n + 0.5) * d.slot_duration));
  }
  return d;
}

void validate_discretization(const SystemParams& p, const DiscretizedTrajectory& d) {
  if (d.positions.empty() || !(d.slot_duration > 0.0)) {
    throw DiscretizationInvalid("empty discretization");
  }
  const double span = static_cast<double>(d.positions.size()) * d.slot_duration;
  if (std::abs(span - p.T) > 1e-9 * std::max(1.0, p.T)) {
    std::ostringstream msg;
    msg << "slots cover " << span << " s instead of T = " << p.T;
    throw DiscretizationInvalid(msg.str());
  }
  const double half = 0.5 * p.D;
  const double slack = 1e-9 * p.D;
  for (std::size_t n = 0; n < d.positions.size(); ++n) {
    const double x = d.positions[n];
    if (!std::isfinite(x) || x < -half - slack || x > half + slack) {
      throw DiscretizationInvalid("slot position outside the user segment");
    }
    if (n > 0 && std::abs(x - d.positions[n - 1]) > p.V * d.slot_duration + slack) {
      throw DiscretizationInvalid("consecutive slots move faster than V");
    }
  }
  if (d.source) validate_trajectory(p, *d.source);
}

SlotPower per_slot_weighted_split(const SystemParams& p, double x, double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidArgument("mu must lie in [0, 1]");
  return split_from_gains(channel_gain(p, x, User::One), channel_gain(p, x, User::Two),
                          p.Pbar, mu);
}

PowerAllocation allocate_power(const SystemParams& p, const DiscretizedTrajectory& traj,
                               const RateProfile& profile, const PowerAllocationOptions& opts) {
  validate_discretization(p, traj);
  const std::vector<SlotGroup> groups = build_groups(p, traj);
  const double duration = static_cast<double>(traj.positions.size()) * traj.slot_duration;

  if (profile.alpha1 == 0.0 || profile.alpha2 == 0.0) {
    const double mu = profile.alpha1 == 0.0 ? 0.0 : 1.0;
    const Evaluation e = evaluate(groups, p.Pbar, mu);
    PowerAllocation out = finish(groups, expand(groups, e.split), e.total, duration,
                          traj.slot_duration, profile);
    out.mu = mu;
    return out;
  }

  double mu_lo = 0.0;
  double mu_hi = 1.0;
  Evaluation lo = evaluate(groups, p.Pbar, mu_lo);
  Evaluation hi = evaluate(groups, p.Pbar, mu_hi);
  int it = 0;
  for (; it < opts.mu_max_iter; ++it) {
    const double mid = 0.5 * (mu_lo + mu_hi);
    Evaluation e = evaluate(groups, p.Pbar, mid);
    const double f = profile_gap(e.total, profile);
    const double scale = std::max(e.total.r1 / profile.alpha1, e.total.r2 / profile.alpha2);
    const bool close = std::abs(f) <= opts.mu_tol * scale;
    if (f < 0.0) {
      mu_lo = mid;
      lo = std::move(e);
    } else {
      mu_hi = mid;
      hi = std::move(e);
    }
    if (close) {
      ++it;
      break;
    }
  }
  PowerAllocation out = mix(groups, lo, hi, duration, traj.slot_duration, profile);
  out.mu = 0.5 * (mu_lo + mu_hi);
  out.iterations = it;
  return out;
}

BoundarySolution mirror_solution(const BoundarySolution& s) {
  BoundarySolution m = s;
  m.profile = s.profile.mirrored();
  m.rate_pair = s.rate_pair.swapped();
  m.trajectory = mirror(s.trajectory);
  m.mu = 1.0 - s.mu;
  m.schedule.slots.assign(s.schedule.slots.rbegin(), s.schedule.slots.rend());
  for (SlotPower& sp : m.schedule.slots) std::swap(sp.p1, sp.p2);
  return m;
}

namespace {

// Search coordinates: x_I, the fraction u of the reachable span flown, and
// the fraction v of the spare time spent hovering at x_I.
struct Coords {
  double xi = 0.0;
  double u = 0.0;
  double v = 0.0;
};

HfhTrajectory coords_to_traj(const SystemParams& p, const Coords& c) {
  const double half = 0.5 * p.D;
  const double xi = std::clamp(c.xi, -half, half);
  const double reach = std::min(half, xi + p.V * p.T);
  const double xf = xi + std::clamp(c.u, 0.0, 1.0) * (reach - xi);
  const double fl = (xf - xi) / p.V;
  const double ti = std::clamp(c.v, 0.0, 1.0) * std::max(0.0, p.T - fl);
  return make_hfh(p, xi, xf, ti);
}

struct Scored {
  Coords c;
  HfhTrajectory traj;
  PowerAllocation res;
};

Scored score(const SystemParams& p, const RateProfile& prof, const Coords& c, int n_slots,
             const PowerAllocationOptions& opts) {
  const HfhTrajectory tr = coords_to_traj(p, c);
  return {c, tr, allocate_power(p, discretize(p, tr, n_slots), prof, opts)};
}

// Weight whose per-slot split at x reproduces the given user-1 power.
double supporting_mu(const SystemParams& p, double x, double p1) {
  return numerics::bisect_increasing(
      [&](double mu) { return per_slot_weighted_split(p, x, mu).p1 - p1; }, 0.0, 1.0, 80);
}

BoundarySolution static_solution(const SystemParams& p, const RateProfile& prof,
                                 const HoverSolution& h, int n_slots) {
  BoundarySolution s;
  s.profile = prof;
  s.rate_pair = h.rate_pair;
  s.r = h.r();
  s.trajectory = static_hover(p, h.x_star);
  s.schedule.slot_duration = p.T / n_slots;
  s.schedule.slots.assign(static_cast<std::size_t>(n_slots), SlotPower{h.p1, h.p2});
  s.mu = supporting_mu(p, h.x_star, h.p1);
  return s;
}

BoundarySolution from_scored(const RateProfile& prof, const Scored& sc) {
  BoundarySolution s;
  s.profile = prof;
  s.rate_pair = sc.res.rate_pair;
  s.r = sc.res.r;
  s.trajectory = sc.traj;
  s.schedule = sc.res.schedule;
  s.mu = sc.res.mu;
  return s;
}

}  // namespace

BoundarySolution solve_profile(const SystemParams& p, const RateProfile& profile,
                               const SearchConfig& cfg) {
  if (profile.alpha1 > profile.alpha2) {
    BoundarySolution m = mirror_solution(solve_profile(p, profile.mirrored(), cfg));
    m.profile = profile;
    return m;
  }
  const HoverSolution hover = solve_v0(p, profile, cfg.hover);
  BoundarySolution stat = static_solution(p, profile, hover, cfg.n_slots);
  stat.diagnostics.static_r = stat.r;
  stat.diagnostics.static_chosen = true;
  if (profile.alpha1 == 0.0 || p.V == 0.0) return stat;

  // Coarse screening grid.
  std::vector<Coords> grid;
  const int gx = std::max(cfg.grid_xi, 2);
  const int gu = std::max(cfg.grid_xf, 2);
  const int gv = std::max(cfg.grid_ti, 2);
  const double half = 0.5 * p.D;
  for (int i = 0; i < gx; ++i) {
    const double xi = i == gx - 1 ? half : -half + p.D * i / (gx - 1);
    for (int j = 0; j < gu; ++j) {
      const double u = static_cast<double>(j) / (gu - 1);
      for (int k = 0; k < gv; ++k) {
        const double v = static_cast<double>(k) / (gv - 1);
        const HfhTrajectory tr = coords_to_traj(p, {xi, u, v});
        if (k > 0 && (tr.x_F == tr.x_I || flight_time(p, tr) >= p.T)) break;
        grid.push_back({xi, u, v});
      }
      if (xi >= half) break;
    }
  }
  std::vector<double> screen(grid.size());
  std::vector<double> span(grid.size());
  parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
    const Scored s = score(p, profile, grid[i], cfg.screen_slots, cfg.power);
    screen[i] = s.res.r;
    span[i] = s.traj.x_F - s.traj.x_I;
  });
  std::size_t best_i = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double tol = 1e-9 * std::max(1.0, screen[best_i]);
    if (screen[i] > screen[best_i] + tol ||
        (screen[i] >= screen[best_i] - tol && span[i] < span[best_i])) {
      best_i = i;
    }
  }

  SearchTrace trace;
  trace.candidates = static_cast<int>(grid.size());
  trace.grid_best_r = screen[best_i];
  trace.static_r = stat.r;

  // Coordinate-wise golden-section refinement of (x_I, u) at the working
  // resolution. For fixed endpoints the objective is concave in the hover
  // split, so v is optimized exactly inside every evaluation.
  const auto split_optimal = [&](Coords c, int n_slots) {
    const HfhTrajectory tr = coords_to_traj(p, c);
    if (tr.is_static() || flight_time(p, tr) >= p.T) {
      c.v = 0.0;
      return score(p, profile, c, n_slots, cfg.power);
    }
    const auto g = numerics::golden_section_maximize(
        [&](double v) { return score(p, profile, {c.xi, c.u, v}, n_slots, cfg.power).res.r; },
        0.0, 1.0, 0.0, cfg.split_iters);
    c.v = g.x;
    return score(p, profile, c, n_slots, cfg.power);
  };
  Scored best = split_optimal(grid[best_i], cfg.n_slots);
  trace.refine_history.push_back(best.res.r);
  const double widths[2] = {p.D / (gx - 1), 1.0 / (gu - 1)};
  const double lows[2] = {-half, 0.0};
  const double highs[2] = {half, 1.0};
  for (int round = 0; round < cfg.refine_rounds; ++round) {
    const double shrink = std::ldexp(1.0, -round);
    for (int axis = 0; axis < 2; ++axis) {
      const auto with = [&](double value) {
        Coords c = best.c;
        (axis == 0 ? c.xi : c.u) = value;
        return c;
      };
      const double centre = axis == 0 ? best.c.xi : best.c.u;
      const double lo = std::max(lows[axis], centre - widths[axis] * shrink);
      const double hi = std::min(highs[axis], centre + widths[axis] * shrink);
      if (!(hi > lo)) continue;
      const auto g = numerics::golden_section_maximize(
          [&](double value) { return split_optimal(with(value), cfg.n_slots).res.r; }, lo, hi,
          0.0, cfg.golden_iters);
      if (g.value > best.res.r) best = split_optimal(with(g.x), cfg.n_slots);
    }
    trace.refine_history.push_back(best.res.r);
  }

  // Resolution check: double the slot count until r settles.
  int n = cfg.n_slots;
  trace.convergence.emplace_back(n, best.res.r);
  while (2 * n <= cfg.max_slots) {
    n *= 2;
    Scored finer = score(p, profile, best.c, n, cfg.power);
    const double change = std::abs(finer.res.r - best.res.r);
    best = std::move(finer);
    trace.convergence.emplace_back(n, best.res.r);
    if (change < cfg.convergence_tol) break;
  }

  if (best.res.r > stat.r) {
    BoundarySolution out = from_scored(profile, best);
    out.diagnostics = trace;
    return out;
  }
  trace.static_chosen = true;
  stat.diagnostics = trace;
  return stat;
}

RegionTrace trace_region(const SystemParams& p, int n_profiles, const SearchConfig& cfg) {
  const std::vector<RateProfile> profiles = uniform_profiles(n_profiles);
  const std::size_t n = profiles.size();
  std::vector<BoundarySolution> sols(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (profiles[i].alpha2 >= profiles[i].alpha1) sols[i] = solve_profile(p, profiles[i], cfg);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (profiles[i].alpha2 < profiles[i].alpha1) {
      sols[i] = mirror_solution(sols[n - 1 - i]);
      sols[i].profile = profiles[i];
    }
  }
  RegionTrace out;
  out.boundary.mode = "sc";
  for (const BoundarySolution& s : sols) {
    out.boundary.points.push_back({s.profile, s.rate_pair, s.trajectory});
  }
  out.solutions = std::move(sols);
  return out;
}

}  // namespace uavbc
