"""Capacity regions of a UAV-served two-user broadcast channel."""

from ._core import (
    SystemParams,
    UavbcError,
    db_to_linear,
    dbm_to_watts,
    dp_trajectory_oracle,
    fixed_boundary,
    intersection_point,
    reference_params,
    region_high_snr,
    region_tinf,
    sc_rate_pair,
    solve_profile,
    solve_v0,
    tdma_solve_profile,
)

__all__ = [
    "SystemParams",
    "UavbcError",
    "db_to_linear",
    "dbm_to_watts",
    "dp_trajectory_oracle",
    "fixed_boundary",
    "intersection_point",
    "reference_params",
    "region_high_snr",
    "region_tinf",
    "sc_rate_pair",
    "solve_profile",
    "solve_v0",
    "tdma_solve_profile",
]
