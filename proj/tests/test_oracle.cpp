#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "uavbc/asymptotic.hpp"
#include "uavbc/errors.hpp"
#include "uavbc/hfh_solver.hpp"
#include "uavbc/oracle.hpp"

using namespace uavbc;
using testing::ref;

TEST_SUITE("oracle") {

TEST_CASE("exhaustive split scan") {
  const SystemParams p = ref();
  const SlotPower one = grid_power_oracle(p, 200.0, 1.0);
  CHECK(one.p1 == p.Pbar);
  CHECK(one.p2 == 0.0);
  const double flat = 0.5 * testing::sc_pair(p, 0.0, 0.0, p.Pbar).r2;
  const SlotPower mid = grid_power_oracle(p, 0.0, 0.5);
  const RatePair r = testing::sc_pair(p, 0.0, mid.p1, mid.p2);
  CHECK(0.5 * r.sum() == doctest::Approx(flat).epsilon(1e-12));
  for (int i = 0; i < 100; ++i) {
    const double x = testing::uniform(-500.0, 500.0);
    const double mu = testing::uniform(0.0, 1.0);
    const SlotPower g = grid_power_oracle(p, x, mu);
    const SlotPower s = per_slot_weighted_split(p, x, mu);
    const RatePair rg = testing::sc_pair(p, x, g.p1, g.p2);
    const RatePair rs = testing::sc_pair(p, x, s.p1, s.p2);
    const bool step = std::abs(g.p1 - s.p1) <= p.Pbar / 10000.0 + 1e-15;
    CHECK((step || mu * rs.r1 + (1 - mu) * rs.r2 >= mu * rg.r1 + (1 - mu) * rg.r2 - 1e-12));
  }
}

TEST_CASE("feasibility re-check") {
  const SystemParams p = ref();
  BoundarySolution zero;
  zero.profile = make_profile(0.5, 0.5);
  zero.trajectory = static_hover(p, 0.0);
  zero.schedule.slot_duration = p.T / 8;
  zero.schedule.slots.assign(8, SlotPower{0.0, 0.0});
  const FeasibilityReport z = check_feasibility(p, zero);
  CHECK(z.pass);
  CHECK(z.bound_single.r1 == 0.0);
  CHECK(z.bound_sum == 0.0);

  BoundarySolution s = solve_profile(testing::with(p, 30.0, 20.0), make_profile(0.4, 0.6));
  CHECK(check_feasibility(testing::with(p, 30.0, 20.0), s).pass);
  s.schedule.slots[3] = {0.6 * 1.01 * p.Pbar, 0.4 * 1.01 * p.Pbar};
  const FeasibilityReport bad = check_feasibility(testing::with(p, 30.0, 20.0), s);
  CHECK_FALSE(bad.pass);
  CHECK(bad.power_violation == doctest::Approx(0.01).epsilon(1e-9));

  BoundarySolution greedy = solve_profile(testing::with(p, 0.0, 60.0), make_profile(0.5, 0.5));
  greedy.rate_pair.r1 += 0.01;
  CHECK_FALSE(check_feasibility(testing::with(p, 0.0, 60.0), greedy).pass);
}

TEST_CASE("path structure measures") {
  const std::vector<double> line{-100, -80, -60, -40, -20, 0, 20, 40};
  CHECK(path_unidirectional(line, 20.0));
  CHECK(path_hover_clusters(line, 20.0) == 0);
  const std::vector<double> hfh{-100, -100, -100, -100, -100, -100, -80, -60, -40, -20, 0,
                                0,    0,    0,    0,    0,    0};
  CHECK(path_unidirectional(hfh, 20.0));
  CHECK(path_hover_clusters(hfh, 20.0) == 2);
  std::vector<double> dither;
  for (int i = 0; i < 30; ++i) dither.push_back(i % 2 == 0 ? 480.0 : 500.0);
  CHECK(path_unidirectional(dither, 20.0));
  CHECK(path_hover_clusters(dither, 20.0) == 1);
  std::vector<double> back;
  for (int i = 0; i < 20; ++i) back.push_back(20.0 * i);
  for (int i = 0; i < 20; ++i) back.push_back(400.0 - 20.0 * i);
  for (int i = 0; i < 40; ++i) back.push_back(20.0 * i);
  CHECK_FALSE(path_unidirectional(back, 20.0));
}

TEST_CASE("trajectory DP") {
  const SystemParams still = testing::with(ref(), 0.0, 60.0);
  SUBCASE("zero speed: constant path matching the static placement") {
    const DpResult d = dp_trajectory_oracle(still, make_profile(0.5, 0.5));
    for (double x : d.path) CHECK(x == d.path.front());
    const double want = solve_v0(still, make_profile(0.5, 0.5)).r();
    CHECK(d.r <= want + 1e-9);
    CHECK(d.r >= want * (1 - 5e-3));
  }
  SUBCASE("finer grids never lose") {
    DpConfig coarse;
    coarse.n_slots = 8;
    coarse.n_positions = 26;
    DpConfig fine = coarse;
    fine.n_positions = 51;
    for (double a1 : {0.2, 0.5}) {
      const double rc = dp_trajectory_oracle(still, RateProfile::from_alpha1(a1), coarse).r;
      const double rf = dp_trajectory_oracle(still, RateProfile::from_alpha1(a1), fine).r;
      CHECK(rf >= rc - 1e-9);
    }
  }
  SUBCASE("single-user corner ends above that user") {
    const DpResult d = dp_trajectory_oracle(ref(), make_profile(0.0, 1.0));
    CHECK(d.path.back() == 500.0);
    CHECK(d.rate_pair.r2 == doctest::Approx(std::log2(101.0)));
  }
  SUBCASE("grid spacing beyond one slot of travel") {
    DpConfig cfg;
    cfg.n_positions = 8;
    CHECK_THROWS_AS(dp_trajectory_oracle(ref(), make_profile(0.5, 0.5), cfg), GridTooCoarse);
  }
  SUBCASE("moving instance on a small grid") {
    const SystemParams p = testing::with(ref(), 30.0, 20.0);
    DpConfig cfg;
    cfg.n_slots = 24;
    cfg.n_positions = 51;
    const DpResult d = dp_trajectory_oracle(p, make_profile(0.5, 0.5), cfg);
    const BoundarySolution s = solve_profile(p, make_profile(0.5, 0.5));
    CHECK(d.r <= s.r + 1e-6);
    CHECK(d.r >= s.r * 0.97);
    CHECK(path_unidirectional(d.path, d.grid_spacing));
    for (std::size_t i = 1; i < d.path.size(); ++i) {
      CHECK(std::abs(d.path[i] - d.path[i - 1]) <= p.V * d.slot_duration + 1e-9);
    }
  }
}

TEST_CASE("numeric crossing oracle") {
  const SystemParams p = ref();
  const RatePair sym = numeric_intersection_oracle(p, 200.0, -200.0);
  CHECK(sym.r1 == doctest::Approx(sym.r2).epsilon(1e-8));
  CHECK_THROWS_AS(numeric_intersection_oracle(p, 100.0, 100.0), DegenerateLocations);
}

}  // TEST_SUITE
