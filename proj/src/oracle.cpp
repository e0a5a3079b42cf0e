#include "uavbc/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "uavbc/numerics.hpp"

namespace uavbc {

namespace {

double weighted(const RatePair& r, double mu) { return mu * r.r1 + (1.0 - mu) * r.r2; }

// Per-position split found by golden-section search on the user-1 power,
// compared against both ends of the range.
SlotPower searched_split(const SystemParams& p, double x, double mu) {
  const auto value = [&](double p1) {
    return weighted(sc_rate_pair(p, x, p1, p.Pbar - p1), mu);
  };
  const auto g = numerics::golden_section_maximize(value, 0.0, p.Pbar, 1e-13 * p.Pbar);
  double best_p1 = g.x;
  double best = g.value;
  for (double edge : {0.0, p.Pbar}) {
    const double v = value(edge);
    if (v > best) {
      best = v;
      best_p1 = edge;
    }
  }
  return {best_p1, p.Pbar - best_p1};
}

struct PositionTable {
  std::vector<SlotPower> split;
  std::vector<RatePair> rates;
};

PositionTable position_table(const SystemParams& p, const std::vector<double>& xs, double mu) {
  PositionTable t;
  for (double x : xs) {
    const SlotPower s = searched_split(p, x, mu);
    t.split.push_back(s);
    t.rates.push_back(sc_rate_pair(p, x, s.p1, s.p2));
  }
  return t;
}

// Path maximizing the weighted rate, used for the single-user corners. Ties
// prefer staying put, then the shorter move, then the lower index.
std::vector<int> weighted_path(const PositionTable& t, double mu, int n_slots, int max_step) {
  const int m = static_cast<int>(t.rates.size());
  std::vector<double> value;
  for (const RatePair& r : t.rates) value.push_back(weighted(r, mu));
  std::vector<double> best(value);
  std::vector<std::vector<int>> from(static_cast<std::size_t>(n_slots),
                                     std::vector<int>(static_cast<std::size_t>(m), -1));
  for (int n = 1; n < n_slots; ++n) {
    std::vector<double> next(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
      int arg = j;
      for (int d = 1; d <= max_step; ++d) {
        for (int cand : {j - d, j + d}) {
          if (cand >= 0 && cand < m && best[static_cast<std::size_t>(cand)] > best[static_cast<std::size_t>(arg)]) {
            arg = cand;
          }
        }
      }
      next[static_cast<std::size_t>(j)] = best[static_cast<std::size_t>(arg)] + value[static_cast<std::size_t>(j)];
      from[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] = arg;
    }
    best.swap(next);
  }
  int end = 0;
  for (int j = 1; j < m; ++j) {
    if (best[static_cast<std::size_t>(j)] > best[static_cast<std::size_t>(end)]) end = j;
  }
  std::vector<int> path(static_cast<std::size_t>(n_slots));
  path.back() = end;
  for (int n = n_slots - 1; n > 0; --n) {
    path[static_cast<std::size_t>(n - 1)] =
        from[static_cast<std::size_t>(n)][static_cast<std::size_t>(path[static_cast<std::size_t>(n)])];
  }
  return path;
}

// A transition of the path: `slots` slots of constant-speed flight ending
// `steps` grid points away. Intermediate slots sit between grid points.
struct Move {
  int slots;
  int steps;
};

// Single-slot moves up to the reach of one slot, plus longer legs whenever
// they allow a higher average speed than every shorter move.
std::vector<Move> dp_moves(int max_step, double reach, double spacing, int max_leg_slots) {
  std::vector<Move> out;
  for (int d = -max_step; d <= max_step; ++d) out.push_back({1, d});
  double speed = max_step;
  for (int m = 2; m <= max_leg_slots && reach > 0.0; ++m) {
    const int k = static_cast<int>(std::floor(m * reach / spacing * (1.0 + 1e-12)));
    if (k > speed * m + 1e-12) {
      out.push_back({m, k});
      out.push_back({m, -k});
      speed = static_cast<double>(k) / m;
    }
  }
  return out;
}

// Every position a path can occupy: the grid refined by the common
// denominator of the leg lengths, keeping only the points some leg visits.
struct Lattice {
  std::vector<Move> moves;
  std::vector<double> x;                // distinct positions
  std::vector<int> grid;                // grid point j -> position index
  std::vector<std::vector<int>> legs;   // [j * moves + mv] -> positions of the leg's slots
};

Lattice build_lattice(const SystemParams& p, int n_positions, double spacing,
                      std::vector<Move> moves) {
  int sub = 1;
  for (const Move& mv : moves) sub = std::lcm(sub, mv.slots);
  const long last = static_cast<long>(n_positions - 1) * sub;
  std::map<long, int> index;
  Lattice lat;
  const auto point = [&](long q) {
    auto [it, inserted] = index.emplace(q, static_cast<int>(lat.x.size()));
    if (inserted) lat.x.push_back(q == last ? 0.5 * p.D : -0.5 * p.D + spacing * q / sub);
    return it->second;
  };
  lat.legs.resize(static_cast<std::size_t>(n_positions) * moves.size());
  for (int j = 0; j < n_positions; ++j) {
    lat.grid.push_back(point(static_cast<long>(j) * sub));
    for (std::size_t mv = 0; mv < moves.size(); ++mv) {
      const Move& m = moves[mv];
      const int dest = j + m.steps;
      if (dest < 0 || dest >= n_positions) continue;
      std::vector<int>& leg = lat.legs[static_cast<std::size_t>(j) * moves.size() + mv];
      for (int i = 1; i <= m.slots; ++i) {
        leg.push_back(point(static_cast<long>(j) * sub + static_cast<long>(m.steps) * i * (sub / m.slots)));
      }
    }
  }
  lat.moves = std::move(moves);
  return lat;
}

// With the per-position power splits of one weight held fixed, the paths
// maximizing min(sum r1 / alpha1, sum r2 / alpha2), one per end position. The
// state carries the accumulated user-1 rate in buckets; each bucket keeps the
// partial path with the largest user-2 total, and the exact user-1 total
// rides along with it.
std::vector<std::vector<double>> profile_paths(const Lattice& lat,
                                               const std::vector<RatePair>& rates,
                                               const RateProfile& prof, int n_positions,
                                               int n_slots, int buckets) {
  const int m = n_positions;
  const std::size_t n_moves = lat.moves.size();
  int longest = 1;
  for (const Move& mv : lat.moves) longest = std::max(longest, mv.slots);

  std::vector<RatePair> leg_sum(lat.legs.size());
  for (std::size_t i = 0; i < lat.legs.size(); ++i) {
    for (int q : lat.legs[i]) {
      leg_sum[i].r1 += rates[static_cast<std::size_t>(q)].r1;
      leg_sum[i].r2 += rates[static_cast<std::size_t>(q)].r2;
    }
  }
  double a_max = 0.0;
  for (const RatePair& r : rates) a_max = std::max(a_max, r.r1);
  const double width = a_max > 0.0 ? a_max * n_slots / buckets : 1.0;
  const auto bucket_of = [&](double a) {
    return std::min(buckets - 1, static_cast<int>(a / width));
  };
  const std::size_t layer = static_cast<std::size_t>(m) * static_cast<std::size_t>(buckets);
  const auto at = [&](int j, int k) {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(buckets) + static_cast<std::size_t>(k);
  };
  const double none = -std::numeric_limits<double>::infinity();
  const std::uint8_t start = 255;

  // Ring of the layers still receiving transitions; back-pointers for all.
  const int ring = longest + 1;
  std::vector<std::vector<double>> sum_b(static_cast<std::size_t>(ring), std::vector<double>(layer, none));
  std::vector<std::vector<double>> sum_a(static_cast<std::size_t>(ring), std::vector<double>(layer, 0.0));
  std::vector<std::uint16_t> from_bucket(layer * static_cast<std::size_t>(n_slots), 0);
  std::vector<std::uint8_t> from_move(layer * static_cast<std::size_t>(n_slots), start);

  for (int j = 0; j < m; ++j) {
    const RatePair& r = rates[static_cast<std::size_t>(lat.grid[static_cast<std::size_t>(j)])];
    const std::size_t i = at(j, bucket_of(r.r1));
    sum_b[0][i] = r.r2;
    sum_a[0][i] = r.r1;
  }
  for (int n = 0; n < n_slots; ++n) {
    std::vector<double>& cb = sum_b[static_cast<std::size_t>(n % ring)];
    std::vector<double>& ca = sum_a[static_cast<std::size_t>(n % ring)];
    if (n == n_slots - 1) break;
    for (int jp = 0; jp < m; ++jp) {
      for (int k = 0; k < buckets; ++k) {
        const std::size_t src = at(jp, k);
        if (cb[src] == none) continue;
        for (std::size_t mv = 0; mv < n_moves; ++mv) {
          const Move& move = lat.moves[mv];
          const int target = n + move.slots;
          if (target >= n_slots) continue;
          const std::size_t leg = static_cast<std::size_t>(jp) * n_moves + mv;
          if (lat.legs[leg].empty()) continue;
          const int j = jp + move.steps;
          const double a = ca[src] + leg_sum[leg].r1;
          const double b = cb[src] + leg_sum[leg].r2;
          const std::size_t dst = at(j, bucket_of(a));
          std::vector<double>& tb = sum_b[static_cast<std::size_t>(target % ring)];
          std::vector<double>& ta = sum_a[static_cast<std::size_t>(target % ring)];
          if (b > tb[dst] || (b == tb[dst] && a > ta[dst])) {
            tb[dst] = b;
            ta[dst] = a;
            const std::size_t bp = layer * static_cast<std::size_t>(target) + dst;
            from_bucket[bp] = static_cast<std::uint16_t>(k);
            from_move[bp] = static_cast<std::uint8_t>(mv);
          }
        }
      }
    }
    std::fill(cb.begin(), cb.end(), none);
    std::fill(ca.begin(), ca.end(), 0.0);
  }
  const std::vector<double>& fb = sum_b[static_cast<std::size_t>((n_slots - 1) % ring)];
  const std::vector<double>& fa = sum_a[static_cast<std::size_t>((n_slots - 1) % ring)];
  // One candidate per end position: its best bucket under the profile.
  std::vector<std::vector<double>> paths;
  for (int end_j = 0; end_j < m; ++end_j) {
    int end_k = -1;
    double top = none;
    for (int k = 0; k < buckets; ++k) {
      const std::size_t i = at(end_j, k);
      if (fb[i] == none) continue;
      const double v = std::min(fa[i] / prof.alpha1, fb[i] / prof.alpha2);
      if (v > top) {
        top = v;
        end_k = k;
      }
    }
    if (end_k < 0) continue;
    std::vector<double> path(static_cast<std::size_t>(n_slots));
    int n = n_slots - 1;
    int j = end_j;
    int k = end_k;
    while (true) {
      const std::size_t bp = layer * static_cast<std::size_t>(n) + at(j, k);
      const std::uint8_t mv = from_move[bp];
      if (n == 0 || mv == start) {
        path[0] = lat.x[static_cast<std::size_t>(lat.grid[static_cast<std::size_t>(j)])];
        break;
      }
      const Move& move = lat.moves[mv];
      const int jp = j - move.steps;
      const std::vector<int>& leg = lat.legs[static_cast<std::size_t>(jp) * n_moves + mv];
      for (int i = 0; i < move.slots; ++i) {
        path[static_cast<std::size_t>(n - move.slots + 1 + i)] = lat.x[static_cast<std::size_t>(leg[static_cast<std::size_t>(i)])];
      }
      n -= move.slots;
      k = from_bucket[bp];
      j = jp;
    }
    paths.push_back(std::move(path));
  }
  return paths;
}

double profile_gap(const RatePair& r, const RateProfile& prof) {
  return r.r1 / prof.alpha1 - r.r2 / prof.alpha2;
}

struct PathScore {
  double r = 0.0;
  RatePair rates;
  double mu = 0.0;
};

// Profile optimum on a fixed path: weight bisection, then time-sharing of the
// two bracketing schedules inside every slot to meet the ratio exactly.
PathScore score_path(const SystemParams& p, const std::vector<double>& path,
                     const RateProfile& prof) {
  std::vector<double> used;
  std::vector<int> local;
  {
    std::map<double, int> index;
    for (double x : path) {
      auto [it, inserted] = index.emplace(x, static_cast<int>(used.size()));
      if (inserted) used.push_back(x);
      local.push_back(it->second);
    }
  }
  const auto rates_at = [&](double mu) {
    const PositionTable t = position_table(p, used, mu);
    RatePair acc;
    for (int i : local) {
      acc.r1 += t.rates[static_cast<std::size_t>(i)].r1;
      acc.r2 += t.rates[static_cast<std::size_t>(i)].r2;
    }
    const double n = static_cast<double>(local.size());
    return RatePair{acc.r1 / n, acc.r2 / n};
  };
  if (prof.alpha1 == 0.0 || prof.alpha2 == 0.0) {
    const double mu = prof.alpha1 == 0.0 ? 0.0 : 1.0;
    const RatePair r = rates_at(mu);
    return {prof.alpha1 == 0.0 ? r.r2 / prof.alpha2 : r.r1 / prof.alpha1, r, mu};
  }
  double lo = 0.0;
  double hi = 1.0;
  RatePair r_lo = rates_at(lo);
  RatePair r_hi = rates_at(hi);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const RatePair r = rates_at(mid);
    if (profile_gap(r, prof) < 0.0) {
      lo = mid;
      r_lo = r;
    } else {
      hi = mid;
      r_hi = r;
    }
  }
  const double f_lo = profile_gap(r_lo, prof);
  const double f_hi = profile_gap(r_hi, prof);
  const double th = f_hi > f_lo ? f_hi / (f_hi - f_lo) : 1.0;  // share of the lo schedule
  const RatePair mixed{th * r_lo.r1 + (1.0 - th) * r_hi.r1, th * r_lo.r2 + (1.0 - th) * r_hi.r2};
  return {std::min(mixed.r1 / prof.alpha1, mixed.r2 / prof.alpha2), mixed, 0.5 * (lo + hi)};
}

}  // namespace

DpResult dp_trajectory_oracle(const SystemParams& p, const RateProfile& profile,
                              const DpConfig& cfg) {
  if (cfg.n_slots < 2 || cfg.n_positions < 3 || cfg.mu_steps < 2) {
    throw InvalidArgument("DP needs at least 2 slots, 3 positions and 2 weights");
  }
  if (cfg.max_leg_slots < 1 || cfg.max_leg_slots > 16 || cfg.rate_buckets < 1 ||
      cfg.rate_buckets > 65536) {
    throw InvalidArgument("DP needs 1..16 leg slots and 1..65536 rate buckets");
  }
  if (profile.alpha1 > profile.alpha2) {
    DpResult m = dp_trajectory_oracle(p, profile.mirrored(), cfg);
    m.rate_pair = m.rate_pair.swapped();
    m.mu = 1.0 - m.mu;
    for (double& x : m.path) x = -x;
    return m;
  }
  const double delta = p.T / cfg.n_slots;
  const double spacing = p.D / (cfg.n_positions - 1);
  int max_step = 0;
  if (p.V > 0.0) {
    const double reach = p.V * delta;
    if (reach < spacing * (1.0 - 1e-12)) {
      std::ostringstream msg;
      msg << "grid spacing " << spacing << " m exceeds V * slot = " << reach << " m";
      throw GridTooCoarse(msg.str());
    }
    max_step = static_cast<int>(std::floor(reach / spacing * (1.0 + 1e-12)));
  }
  std::vector<double> xs;
  for (int j = 0; j < cfg.n_positions; ++j) {
    xs.push_back(j == cfg.n_positions - 1 ? 0.5 * p.D : -0.5 * p.D + j * spacing);
  }

  DpResult best;
  best.r = -1.0;
  best.slot_duration = delta;
  best.grid_spacing = spacing;
  const auto consider = [&](const std::vector<double>& path) {
    const PathScore s = score_path(p, path, profile);
    if (s.r > best.r) {
      best.r = s.r;
      best.rate_pair = s.rates;
      best.mu = s.mu;
      best.path = path;
    }
    return s.r;
  };

  if (profile.alpha1 == 0.0 || profile.alpha2 == 0.0) {
    const double mu = profile.alpha1 == 0.0 ? 0.0 : 1.0;
    std::vector<double> path;
    for (int j : weighted_path(position_table(p, xs, mu), mu, cfg.n_slots, max_step)) {
      path.push_back(xs[static_cast<std::size_t>(j)]);
    }
    consider(path);
    return best;
  }

  // Outer search over the weight that fixes the per-position power splits:
  // a uniform grid, then golden-section refinement between the neighbours of
  // the best grid weight.
  std::vector<Move> moves = dp_moves(max_step, p.V * delta, spacing, cfg.max_leg_slots);
  if (moves.size() >= 255) throw InvalidArgument("DP grid allows too many moves per slot");
  const Lattice lat = build_lattice(p, cfg.n_positions, spacing, std::move(moves));
  const auto value_at = [&](double mu) {
    double v = -1.0;
    for (const auto& path : profile_paths(lat, position_table(p, lat.x, mu).rates, profile,
                                          cfg.n_positions, cfg.n_slots, cfg.rate_buckets)) {
      v = std::max(v, consider(path));
    }
    return v;
  };
  int best_i = 0;
  double best_v = -1.0;
  for (int i = 0; i < cfg.mu_steps; ++i) {
    const double v = value_at(static_cast<double>(i) / (cfg.mu_steps - 1));
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
  const double lo = static_cast<double>(std::max(0, best_i - 1)) / (cfg.mu_steps - 1);
  const double hi = static_cast<double>(std::min(cfg.mu_steps - 1, best_i + 1)) / (cfg.mu_steps - 1);
  numerics::golden_section_maximize(value_at, lo, hi, 0.0, cfg.mu_refine);
  return best;
}

std::vector<double> path_smooth(const std::vector<double>& path, int window) {
  const int half = std::max(0, window / 2);
  const int n = static_cast<int>(path.size());
  std::vector<double> out(path.size());
  for (int i = 0; i < n; ++i) {
    const int reach = std::min({half, i, n - 1 - i});
    const int lo = i - reach;
    const int hi = i + reach;
    double acc = 0.0;
    for (int k = lo; k <= hi; ++k) acc += path[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(i)] = acc / (hi - lo + 1);
  }
  return out;
}

bool path_unidirectional(const std::vector<double>& path, double noise, int window) {
  const std::vector<double> s = path_smooth(path, window);
  if (s.size() < 2) return true;
  const double sign = s.back() >= s.front() ? 1.0 : -1.0;
  double extreme = sign * s.front();
  for (double x : s) {
    if (sign * x < extreme - noise - 1e-9) return false;
    extreme = std::max(extreme, sign * x);
  }
  return true;
}

int path_hover_clusters(const std::vector<double>& path, double noise, int window) {
  const std::vector<double> s = path_smooth(path, window);
  std::vector<double> centres;
  std::size_t i = 0;
  while (i < s.size()) {
    // Extend a run while the smoothed position moves less than half a step.
    std::size_t j = i;
    double acc = s[i];
    while (j + 1 < s.size() && std::abs(s[j + 1] - s[j]) <= 0.5 * noise + 1e-9) {
      ++j;
      acc += s[j];
    }
    if (j > i) {
      const double centre = acc / static_cast<double>(j - i + 1);
      if (centres.empty() || std::abs(centre - centres.back()) > noise + 1e-9) {
        centres.push_back(centre);
      }
    }
    i = j + 1;
  }
  return static_cast<int>(centres.size());
}

SlotPower grid_power_oracle(const SystemParams& p, double x, double mu, int n_splits) {
  if (n_splits < 2) throw InvalidArgument("need at least two splits");
  SlotPower best{0.0, p.Pbar};
  double top = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_splits; ++i) {
    const double p1 = i == n_splits - 1 ? p.Pbar : p.Pbar * i / (n_splits - 1);
    const double p2 = std::max(0.0, p.Pbar - p1);
    const double v = weighted(sc_rate_pair(p, x, p1, p2), mu);
    if (v > top) {
      top = v;
      best = {p1, p2};
    }
  }
  return best;
}

namespace {

// r2 on the boundary of C_f(x) at a given r1, through a bisection on the
// user-1 power (r1 rises with it).
double searched_boundary_r2(const SystemParams& p, double x, double r1) {
  const double p1 = numerics::bisect_increasing(
      [&](double q) { return sc_rate_pair(p, x, q, p.Pbar - q).r1 - r1; }, 0.0, p.Pbar, 200);
  return sc_rate_pair(p, x, p1, p.Pbar - p1).r2;
}

}  // namespace

RatePair numeric_intersection_oracle(const SystemParams& p, double xB, double xC) {
  if (xB == xC) throw DegenerateLocations("xB == xC");
  if (xC > xB) throw InvalidArgument("need xC < xB");
  const double top = std::min(max_rate(p, xB, User::One), max_rate(p, xC, User::One));
  const auto diff = [&](double r1) {
    return searched_boundary_r2(p, xB, r1) - searched_boundary_r2(p, xC, r1);
  };
  double lo = 0.0;
  double hi = top;
  const double f_lo = diff(lo);
  const double f_hi = diff(hi);
  if (!(f_lo > 0.0 && f_hi < 0.0)) {
    std::ostringstream msg;
    msg << "boundary difference does not change sign: " << f_lo << " at 0, " << f_hi
        << " at " << top;
    throw NoSignChange(msg.str());
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (diff(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double r1 = 0.5 * (lo + hi);
  return {r1, searched_boundary_r2(p, xB, r1)};
}

bool hull_membership_oracle(const SystemParams& p, double xI, double xF, double x,
                            int n_samples, int hull_samples) {
  // Dense boundary samples of both regions, swept by user-1 power.
  std::vector<RatePair> pts;
  for (double loc : {xI, xF}) {
    for (int i = 0; i < hull_samples; ++i) {
      const double p1 = i == hull_samples - 1 ? p.Pbar : p.Pbar * i / (hull_samples - 1);
      pts.push_back(sc_rate_pair(p, loc, p1, std::max(0.0, p.Pbar - p1)));
    }
  }
  std::sort(pts.begin(), pts.end(), [](const RatePair& a, const RatePair& b) {
    return a.r1 < b.r1 || (a.r1 == b.r1 && a.r2 > b.r2);
  });
  // Monotone-chain upper hull.
  std::vector<RatePair> hull;
  for (const RatePair& q : pts) {
    if (!hull.empty() && q.r1 == hull.back().r1) continue;
    while (hull.size() >= 2) {
      const RatePair& a = hull[hull.size() - 2];
      const RatePair& b = hull.back();
      const double cross = (b.r1 - a.r1) * (q.r2 - a.r2) - (b.r2 - a.r2) * (q.r1 - a.r1);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(q);
  }
  const auto height = [&](double r1) {
    if (r1 <= hull.front().r1) return hull.front().r2;
    if (r1 > hull.back().r1) return -std::numeric_limits<double>::infinity();
    const auto it = std::lower_bound(hull.begin(), hull.end(), r1,
                                     [](const RatePair& a, double v) { return a.r1 < v; });
    const RatePair& b = *it;
    const RatePair& a = *(it - 1);
    return a.r2 + (b.r2 - a.r2) * (r1 - a.r1) / (b.r1 - a.r1);
  };
  const double tol = 1e-7 * std::max(1.0, overhead_rate(p));
  for (int i = 0; i < n_samples; ++i) {
    const RateProfile prof = RateProfile::from_alpha1(
        n_samples == 1 ? 0.5 : static_cast<double>(i) / (n_samples - 1));
    // Boundary point with the sampled ratio, by bisection on user-1 power.
    const double p1 = numerics::bisect_increasing(
        [&](double q) {
          const RatePair r = sc_rate_pair(p, x, q, p.Pbar - q);
          return prof.alpha2 * r.r1 - prof.alpha1 * r.r2;
        },
        0.0, p.Pbar, 200);
    const RatePair r = sc_rate_pair(p, x, p1, p.Pbar - p1);
    if (r.r1 > hull.back().r1 + tol) return false;
    if (r.r2 > height(std::min(r.r1, hull.back().r1)) + tol) return false;
  }
  return true;
}

namespace {

// Dual multiple-access powers that place the superposition rate pair at a
// corner of the dual pentagon: the weak user keeps p_w / (1 + p_s h_w).
struct Dual {
  double q1;
  double q2;
};

Dual dual_powers(double h1, double h2, double p1, double p2) {
  if (h1 > h2) {
    const double q2 = p2 / (1.0 + p1 * h2);
    return {p1 + p2 - q2, q2};
  }
  const double q1 = p1 / (1.0 + p2 * h1);
  return {q1, p1 + p2 - q1};
}

double sampled_speed_violation(const SystemParams& p, const HfhTrajectory& tr, int samples) {
  double worst = 0.0;
  double prev = hfh_position(tr, p, 0.0);
  const double dt = p.T / samples;
  for (int i = 1; i <= samples; ++i) {
    const double t = i == samples ? p.T : i * dt;
    const double x = hfh_position(tr, p, t);
    worst = std::max(worst, std::abs(x - prev) - p.V * dt);
    prev = x;
  }
  const double half = 0.5 * p.D;
  worst = std::max({worst, -half - tr.x_I, tr.x_F - half, tr.x_I - tr.x_F});
  return std::max(0.0, worst);
}

void finalize(FeasibilityReport& rep, const RatePair& claimed, const RateProfile& prof,
              double r, const FeasibilityConfig& cfg) {
  rep.rate_violation = std::max({0.0, claimed.r1 - rep.bound_single.r1,
                                 claimed.r2 - rep.bound_single.r2,
                                 claimed.r1 + claimed.r2 - rep.bound_sum});
  rep.profile_violation =
      std::max({0.0, prof.alpha1 * r - claimed.r1, prof.alpha2 * r - claimed.r2});
  rep.pass = rep.rate_violation <= cfg.eps && rep.speed_violation <= cfg.eps &&
             rep.power_violation <= cfg.eps && rep.profile_violation <= cfg.eps &&
             claimed.r1 >= -cfg.eps && claimed.r2 >= -cfg.eps;
  if (!rep.pass && rep.detail.empty()) {
    std::ostringstream msg;
    msg << "rate " << rep.rate_violation << ", speed " << rep.speed_violation << ", power "
        << rep.power_violation << ", profile " << rep.profile_violation;
    rep.detail = msg.str();
  }
}

}  // namespace

FeasibilityReport check_feasibility(const SystemParams& p, const BoundarySolution& s,
                                    const FeasibilityConfig& cfg) {
  FeasibilityReport rep;
  const HfhTrajectory& tr = s.trajectory;
  try {
    validate_trajectory(p, tr);
  } catch (const Error& e) {
    rep.speed_violation = std::numeric_limits<double>::infinity();
    rep.detail = e.what();
    finalize(rep, s.rate_pair, s.profile, s.r, cfg);
    return rep;
  }
  const std::size_t n = s.schedule.slots.size();
  const double delta = s.schedule.slot_duration;
  if (n == 0 || std::abs(static_cast<double>(n) * delta - p.T) > 1e-9 * p.T) {
    rep.rate_violation = std::numeric_limits<double>::infinity();
    rep.detail = "schedule does not cover [0, T]";
    rep.pass = false;
    return rep;
  }
  for (const SlotPower& sp : s.schedule.slots) {
    rep.power_violation =
        std::max({rep.power_violation, (sp.p1 + sp.p2 - p.Pbar) / p.Pbar, -sp.p1 / p.Pbar,
                  -sp.p2 / p.Pbar});
  }
  rep.speed_violation = sampled_speed_violation(p, tr, static_cast<int>(4 * n));

  const double fly_start = tr.t_I;
  const double fly_end = p.T - tr.t_F;
  const double scale = std::max(1.0, overhead_rate(p));
  double b1 = 0.0;
  double b2 = 0.0;
  double b12 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const SlotPower sp = s.schedule.slots[k];
    const double q1p = std::max(0.0, sp.p1);
    const double q2p = std::max(0.0, sp.p2);
    const double a = static_cast<double>(k) * delta;
    for (int m = 0; m < cfg.sub_intervals; ++m) {
      const double lo = a + delta * m / cfg.sub_intervals;
      const double hi = m == cfg.sub_intervals - 1 ? a + delta : a + delta * (m + 1) / cfg.sub_intervals;
      std::vector<double> cuts{lo};
      for (double c : {fly_start, fly_end}) {
        if (c > lo && c < hi) cuts.push_back(c);
      }
      cuts.push_back(hi);
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const auto at = [&](double t, int which) {
          const double x = hfh_position(tr, p, std::clamp(t, 0.0, p.T));
          const double h1 = channel_gain(p, x, User::One);
          const double h2 = channel_gain(p, x, User::Two);
          const Dual q = dual_powers(h1, h2, q1p, q2p);
          if (which == 0) return std::log2(1.0 + q.q1 * h1);
          if (which == 1) return std::log2(1.0 + q.q2 * h2);
          return std::log2(1.0 + q.q1 * h1 + q.q2 * h2);
        };
        const double tol = cfg.quad_tol * scale * (cuts[c + 1] - cuts[c]);
        b1 += numerics::adaptive_simpson([&](double t) { return at(t, 0); }, cuts[c], cuts[c + 1], tol);
        b2 += numerics::adaptive_simpson([&](double t) { return at(t, 1); }, cuts[c], cuts[c + 1], tol);
        b12 += numerics::adaptive_simpson([&](double t) { return at(t, 2); }, cuts[c], cuts[c + 1], tol);
      }
    }
  }
  rep.bound_single = {b1 / p.T, b2 / p.T};
  rep.bound_sum = b12 / p.T;
  finalize(rep, s.rate_pair, s.profile, s.r, cfg);
  return rep;
}

FeasibilityReport check_feasibility(const SystemParams& p, const TdmaSolution& s,
                                    const FeasibilityConfig& cfg) {
  FeasibilityReport rep;
  const HfhTrajectory& tr = s.trajectory;
  try {
    validate_trajectory(p, tr);
  } catch (const Error& e) {
    rep.speed_violation = std::numeric_limits<double>::infinity();
    rep.detail = e.what();
    finalize(rep, s.rate_pair, s.profile, s.r, cfg);
    return rep;
  }
  if (!(s.t1 >= 0.0 && s.t1 <= p.T)) {
    rep.rate_violation = std::numeric_limits<double>::infinity();
    rep.detail = "switch time outside [0, T]";
    return rep;
  }
  const int pieces = 256 * cfg.sub_intervals;
  rep.speed_violation = sampled_speed_violation(p, tr, pieces);

  // One user at full power at every instant: user 1 before t1, user 2 after.
  std::vector<double> cuts;
  for (int i = 0; i <= pieces; ++i) cuts.push_back(i == pieces ? p.T : p.T * i / pieces);
  for (double c : {tr.t_I, p.T - tr.t_F, s.t1}) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const double scale = std::max(1.0, overhead_rate(p));
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double lo = cuts[c];
    const double hi = cuts[c + 1];
    const bool first = 0.5 * (lo + hi) < s.t1;
    const User u = first ? User::One : User::Two;
    const double v = numerics::adaptive_simpson(
        [&](double t) {
          const double x = hfh_position(tr, p, std::clamp(t, 0.0, p.T));
          return std::log2(1.0 + p.Pbar * channel_gain(p, x, u));
        },
        lo, hi, cfg.quad_tol * scale * (hi - lo));
    (first ? b1 : b2) += v;
  }
  rep.bound_single = {b1 / p.T, b2 / p.T};
  rep.bound_sum = (b1 + b2) / p.T;
  finalize(rep, s.rate_pair, s.profile, s.r, cfg);
  return rep;
}

}  // namespace uavbc
