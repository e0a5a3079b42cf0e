import math

import pytest

import uavbc


@pytest.fixture(scope="module")
def params():
    return uavbc.reference_params()


def test_reference_parameters(params):
    assert params.beta0 == pytest.approx(1e8)
    assert params.Pbar == pytest.approx(0.01)


def test_tinf_region_sum_rate(params):
    rows = uavbc.region_tinf(params, 5)
    assert len(rows) == 5
    for row in rows:
        assert row["r1"] + row["r2"] == pytest.approx(math.log2(101.0), abs=1e-9)


def test_fixed_corner_above_user_two(params):
    _, _, r1, r2 = uavbc.fixed_boundary(params, 500.0, 1.0, 0.0)
    assert r1 == pytest.approx(0.9928, abs=1e-4)
    assert r2 == 0.0


def test_static_hover_matches_fixed_profile(params):
    still = params.with_motion(0.0, 60.0)
    hover = uavbc.solve_v0(still, 0.5, 0.5)
    sol = uavbc.solve_profile(still, 0.5, 0.5)
    assert sol["r1"] == pytest.approx(hover["r1"], rel=1e-6)
    assert sol["trajectory"]["x_I"] == sol["trajectory"]["x_F"]


def test_tdma_inside_sc(params):
    short = params.with_motion(30.0, 20.0)
    sc = uavbc.solve_profile(short, 0.5, 0.5)
    tdma = uavbc.tdma_solve_profile(short, 0.5, 0.5)
    assert tdma["r"] <= sc["r"] + 1e-6


def test_errors_are_raised(params):
    with pytest.raises(uavbc.UavbcError):
        uavbc.SystemParams(1e-5, 1e-13, -1.0, 1000.0, 0.01, 30.0, 60.0)
    with pytest.raises(uavbc.UavbcError):
        uavbc.dp_trajectory_oracle(params, 0.5, 0.5, 64, 8)
