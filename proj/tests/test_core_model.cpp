#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "uavbc/core_model.hpp"
#include "uavbc/errors.hpp"

using namespace uavbc;
using testing::ref;

TEST_SUITE("core-model") {

TEST_CASE("parameter validation derives the normalized gain") {
  SystemParams raw;
  raw.gamma0 = 1e-5;
  raw.sigma2 = 1e-13;
  CHECK(validate_params(raw).beta0 == doctest::Approx(1e8).epsilon(1e-15));

  raw.gamma0 = 1.0;
  raw.sigma2 = 1.0;
  CHECK(validate_params(raw).beta0 == 1.0);

  raw.H = 0.0;
  try {
    validate_params(raw);
    FAIL("expected InvalidParams");
  } catch (const InvalidParams& e) {
    CHECK(e.field() == "H");
  }
  raw.H = 100.0;
  raw.V = -1.0;
  CHECK_THROWS_AS(validate_params(raw), InvalidParams);
  raw.V = 0.0;
  CHECK_NOTHROW(validate_params(raw));
}

TEST_CASE("reference scenario in linear units") {
  const SystemParams p = ref();
  CHECK(p.gamma0 == doctest::Approx(1e-5));
  CHECK(p.sigma2 == doctest::Approx(1e-13));
  CHECK(p.Pbar == doctest::Approx(0.01));
  CHECK(p.beta0 == doctest::Approx(1e8));
}

TEST_CASE("channel gain") {
  const SystemParams p = ref();
  CHECK(channel_gain(p, 500.0, User::Two) == doctest::Approx(1e4));
  CHECK(channel_gain(p, 500.0, User::One) == doctest::Approx(99.0099).epsilon(1e-6));
  CHECK(channel_gain(p, 0.0, User::One) == channel_gain(p, 0.0, User::Two));
  SUBCASE("peak above the user, decreasing with distance") {
    double prev = channel_gain(p, 500.0, User::Two);
    CHECK(prev == doctest::Approx(p.beta0 / (p.H * p.H)));
    for (int i = 1; i <= 100; ++i) {
      const double g = channel_gain(p, 500.0 - 10.0 * i, User::Two);
      CHECK(g < prev);
      prev = g;
    }
  }
}

TEST_CASE("superposition rates") {
  const SystemParams p = ref();
  const RatePair mid = sc_rate_pair(p, 0.0, 0.005, 0.005);
  CHECK(mid.sum() == doctest::Approx(2.2768).epsilon(1e-4));
  CHECK(mid.sum() == doctest::Approx(std::log2(1.0 + p.Pbar * p.beta0 / (250000.0 + 10000.0))));
  const RatePair zero = sc_rate_pair(p, 100.0, 0.0, 0.0);
  CHECK(zero.r1 == 0.0);
  CHECK(zero.r2 == 0.0);
  const RatePair corner = sc_rate_pair(p, 500.0, 0.0, p.Pbar);
  CHECK(corner.r1 == 0.0);
  CHECK(corner.r2 == doctest::Approx(6.6582).epsilon(1e-4));
  CHECK(corner.r2 == doctest::Approx(std::log2(101.0)));
  CHECK_THROWS_AS(sc_rate_pair(p, 0.0, 0.006, 0.006), PowerBudgetExceeded);
  CHECK(strong_user(p, 0.0) == User::Two);

  SUBCASE("matches the direct formula and is mirror-symmetric") {
    for (int i = 0; i < 200; ++i) {
      const double x = testing::uniform(-500.0, 500.0);
      const double p1 = testing::uniform(0.0, p.Pbar);
      const double p2 = p.Pbar - p1;
      const RatePair r = sc_rate_pair(p, x, p1, p2);
      const RatePair want = testing::sc_pair(p, x, p1, p2);
      CHECK(r.r1 == doctest::Approx(want.r1).epsilon(1e-12));
      CHECK(r.r2 == doctest::Approx(want.r2).epsilon(1e-12));
      const RatePair m = sc_rate_pair(p, -x, p2, p1);
      CHECK(m.r1 == doctest::Approx(r.r2).epsilon(1e-12));
      CHECK(m.r2 == doctest::Approx(r.r1).epsilon(1e-12));
      CHECK(r.sum() <= std::log2(1.0 + p.Pbar * p.beta0 / (p.H * p.H)) + 1e-12);
    }
  }
}

TEST_CASE("rate profiles") {
  CHECK_THROWS_AS(make_profile(0.6, 0.6), InvalidArgument);
  CHECK_THROWS_AS(make_profile(-0.1, 1.1), InvalidArgument);
  const auto prof = uniform_profiles(5);
  REQUIRE(prof.size() == 5);
  CHECK(prof.front().alpha1 == 0.0);
  CHECK(prof.back().alpha1 == 1.0);
  CHECK(prof[2].alpha1 == doctest::Approx(0.5));
}

TEST_CASE("hover-fly-hover positions") {
  const SystemParams p = ref();
  const HfhTrajectory tr = make_hfh(p, -500.0, 500.0, 10.0);
  CHECK(tr.t_F == doctest::Approx(60.0 - 10.0 - 1000.0 / 30.0));
  CHECK(hfh_position(tr, p, 0.0) == -500.0);
  CHECK(hfh_position(tr, p, 60.0) == 500.0);
  CHECK(hfh_position(tr, p, 10.0 + 500.0 / 30.0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_THROWS_AS(hfh_position(tr, p, 61.0), TimeOutOfRange);
  CHECK_THROWS_AS(make_hfh(p, -500.0, 500.0, 40.0), InvalidTrajectory);
  CHECK_THROWS_AS(make_hfh(p, 100.0, -100.0, 0.0), InvalidTrajectory);

  const HfhTrajectory still = static_hover(p, 123.0);
  for (double t : {0.0, 17.0, 60.0}) CHECK(hfh_position(still, p, t) == 123.0);

  SUBCASE("speed limit holds between samples") {
    for (int i = 0; i < 600; ++i) {
      const double t = 0.1 * i;
      const double dt = 0.1;
      CHECK(std::abs(hfh_position(tr, p, t + dt) - hfh_position(tr, p, t)) <= p.V * dt + 1e-9);
    }
  }
  SUBCASE("mirror") {
    const HfhTrajectory m = mirror(make_hfh(p, -300.0, 200.0, 5.0));
    CHECK(m.x_I == -200.0);
    CHECK(m.x_F == 300.0);
    CHECK(m.t_F == 5.0);
  }
  SUBCASE("zero speed allows only a static hover") {
    const SystemParams still_p = testing::with(p, 0.0, 60.0);
    CHECK_NOTHROW(make_hfh(still_p, 50.0, 50.0, 20.0));
    CHECK_THROWS_AS(make_hfh(still_p, 0.0, 50.0, 0.0), InvalidTrajectory);
  }
}

TEST_CASE("leg integrals") {
  const SystemParams p = ref();
  CHECK(leg_rate_integral(p, User::Two, 100.0, 100.0, p.Pbar) == 0.0);
  CHECK(leg_rate_integral(p, User::Two, -500.0, 500.0, 0.0) == 0.0);
  const double want = testing::trapezoid(
                          [&](double x) { return std::log2(1.0 + p.Pbar * testing::gain(p, x, 2)); },
                          -500.0, 500.0, 100000) /
                      p.V;
  CHECK(leg_rate_integral(p, User::Two, -500.0, 500.0, p.Pbar) == doctest::Approx(want).epsilon(1e-6));
  const SystemParams still = testing::with(p, 0.0, 60.0);
  CHECK_THROWS_AS(leg_rate_integral(still, User::One, 0.0, 10.0, p.Pbar), ZeroSpeedLeg);
}

}  // TEST_SUITE
