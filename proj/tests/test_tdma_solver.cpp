#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "uavbc/asymptotic.hpp"
#include "uavbc/errors.hpp"
#include "uavbc/hfh_solver.hpp"
#include "uavbc/oracle.hpp"
#include "uavbc/tdma_solver.hpp"

using namespace uavbc;
using testing::ref;

TEST_SUITE("tdma-solver") {

TEST_CASE("scheduled rates") {
  const SystemParams p = ref();
  const HfhTrajectory tr = make_hfh(p, -500.0, 500.0, 13.0);
  const RatePair none = tdma_rates(p, tr, 0.0);
  CHECK(none.r1 == 0.0);
  CHECK(none.r2 > 0.0);
  const HfhTrajectory left = static_hover(p, -500.0);
  const RatePair half = tdma_rates(p, left, 30.0);
  CHECK(half.r1 == doctest::Approx(3.3291).epsilon(1e-4));
  CHECK(half.r2 == doctest::Approx(0.4964).epsilon(1e-4));
  const RatePair all = tdma_rates(p, left, 60.0);
  CHECK(all.r1 == doctest::Approx(6.6582).epsilon(1e-4));
  CHECK(all.r2 == 0.0);
  CHECK_THROWS_AS(tdma_rates(p, tr, -1.0), TimeOutOfRange);
  CHECK_THROWS_AS(tdma_rates(p, tr, 61.0), TimeOutOfRange);

  SUBCASE("flight segment against a trapezoid") {
    const double t1 = 35.0;
    const auto user1 = [&](double t) {
      return std::log2(1.0 + p.Pbar * testing::gain(p, hfh_position(tr, p, t), 1));
    };
    const double want = testing::trapezoid(user1, 0.0, t1, 200000) / p.T;
    CHECK(tdma_rates(p, tr, t1).r1 == doctest::Approx(want).epsilon(1e-7));
  }
}

TEST_CASE("switch time") {
  const SystemParams p = ref();
  const HfhTrajectory sym = make_hfh(p, -500.0, 500.0, 0.5 * (60.0 - 1000.0 / 30.0));
  CHECK(solve_t1(p, sym, make_profile(0.5, 0.5)) == doctest::Approx(30.0).epsilon(1e-8));
  CHECK(solve_t1(p, sym, make_profile(0.0, 1.0)) == 0.0);

  const HfhTrajectory tr = make_hfh(p, -350.0, 420.0, 18.0);
  const RateProfile prof = make_profile(0.35, 0.65);
  const double t1 = solve_t1(p, tr, prof);
  double best = 0.0;
  double best_gap = 1e300;
  // 1e5-point scan of [0, T], evaluated only within 0.5 s of the root.
  const int n = 100000;
  const int lo = static_cast<int>((t1 - 0.5) / p.T * n);
  const int hi = static_cast<int>((t1 + 0.5) / p.T * n) + 1;
  for (int i = std::max(0, lo); i <= std::min(n, hi); ++i) {
    const double t = p.T * i / n;
    const RatePair r = tdma_rates(p, tr, t);
    const double gap = std::abs(r.r1 / prof.alpha1 - r.r2 / prof.alpha2);
    if (gap < best_gap) {
      best_gap = gap;
      best = t;
    }
  }
  CHECK(std::abs(t1 - best) <= p.T / n);
}

TEST_CASE("profile solutions") {
  const SystemParams p = ref();
  SUBCASE("corner") {
    const TdmaSolution s = tdma_solve_profile(p, make_profile(0.0, 1.0));
    CHECK(s.rate_pair.r2 == doctest::Approx(6.6582).epsilon(1e-4));
    CHECK(s.trajectory.x_I == 500.0);
  }
  SUBCASE("hover-only construction is in the family") {
    const TdmaSolution s = tdma_solve_profile(p, make_profile(0.5, 0.5));
    CHECK(s.rate_pair.r1 >= 1.4796);
    CHECK(s.rate_pair.r1 == doctest::Approx(s.rate_pair.r2).epsilon(1e-8));
    CHECK(check_feasibility(p, s).pass);
  }
  SUBCASE("zero speed: a fixed point dominated by superposition") {
    const SystemParams still = testing::with(p, 0.0, 60.0);
    const TdmaSolution s = tdma_solve_profile(still, make_profile(0.5, 0.5));
    CHECK(s.trajectory.is_static());
    CHECK(s.diagnostics.family == TdmaFamily::Fixed);
    CHECK(s.rate_pair.r1 == doctest::Approx(s.rate_pair.r2).epsilon(1e-8));
    CHECK(s.r < solve_v0(still, make_profile(0.5, 0.5)).r());
  }
  SUBCASE("mirrored profiles") {
    const SystemParams short_flight = testing::with(p, 30.0, 20.0);
    const TdmaSolution a = tdma_solve_profile(short_flight, make_profile(0.2, 0.8));
    const TdmaSolution b = tdma_solve_profile(short_flight, make_profile(0.8, 0.2));
    CHECK(a.rate_pair.r1 == doctest::Approx(b.rate_pair.r2).epsilon(1e-9));
    CHECK(b.t1 == doctest::Approx(short_flight.T - a.t1));
  }
}

TEST_CASE("traced regions") {
  const SystemParams fast = ref();
  const SystemParams slow = testing::with(fast, 30.0, 20.0);
  const SystemParams still = testing::with(fast, 0.0, 60.0);
  const auto a = tdma_trace_region(fast, 17);
  const auto b = tdma_trace_region(slow, 17);
  const auto c = tdma_trace_region(still, 17);
  CHECK(a.boundary.mode == "tdma");
  for (std::size_t i = 0; i < 17; ++i) {
    const RatePair ra = a.boundary.points[i].rate_pair;
    const RatePair rb = b.boundary.points[i].rate_pair;
    const RatePair rc = c.boundary.points[i].rate_pair;
    CHECK(ra.r1 >= rb.r1 - 1e-9);
    CHECK(ra.r2 >= rb.r2 - 1e-9);
    CHECK(rb.r1 >= rc.r1 - 1e-9);
    CHECK(rb.r2 >= rc.r2 - 1e-9);
    CHECK(ra.sum() <= std::log2(101.0) + 1e-9);
    for (const auto* tr : {&a, &b}) {
      const HfhTrajectory& t = tr->solutions[i].trajectory;
      // Hovering happens only above the users.
      if (t.t_I > 1e-9) CHECK(std::abs(t.x_I) == 500.0);
      if (t.t_F > 1e-9) CHECK(std::abs(t.x_F) == 500.0);
    }
  }
  CHECK(a.boundary.points.front().rate_pair.r2 == doctest::Approx(std::log2(101.0)));
  CHECK(a.boundary.points.back().rate_pair.r1 == doctest::Approx(std::log2(101.0)));
}

}  // TEST_SUITE
