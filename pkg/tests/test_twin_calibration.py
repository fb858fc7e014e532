"""Drift law closed-form behaviour."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpuops.twin.calibration import DAY_S, DriftParams, drifted_fidelity


def test_no_decay_at_zero():
    assert drifted_fidelity(0.999, 0.979, 0.0, 7 * DAY_S) == 0.999


def test_one_tau_leaves_1_over_e():
    tau = 7 * DAY_S
    got = drifted_fidelity(0.999, 0.979, tau, tau)
    assert got == pytest.approx(0.979 + 0.02 / math.e, rel=1e-12)


def test_long_idle_approaches_floor():
    got = drifted_fidelity(0.999, 0.979, 1000 * DAY_S, 7 * DAY_S)
    assert got == pytest.approx(0.979, abs=1e-15)


def test_negative_dt_rejected():
    with pytest.raises(ValueError, match="before the calibration"):
        drifted_fidelity(0.999, 0.979, -1.0, DAY_S)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(0.9, 0.9999),
    st.floats(0.0, 30 * DAY_S),
    st.floats(0.0, 30 * DAY_S),
)
def test_monotone_nonincreasing(level, t1, t2):
    floor = level - 0.02
    lo, hi = sorted((t1, t2))
    tau = 7 * DAY_S
    assert drifted_fidelity(level, floor, hi, tau) <= drifted_fidelity(level, floor, lo, tau) + 1e-15


@settings(max_examples=60, deadline=None)
@given(st.floats(0.9, 0.9999), st.floats(0.0, 60 * DAY_S))
def test_bounded_by_floor_and_start(level, dt):
    floor = level - 0.02
    got = drifted_fidelity(level, floor, dt, 14 * DAY_S)
    assert floor - 1e-15 <= got <= level + 1e-15


def test_tau_for_families():
    p = DriftParams()
    assert p.tau_for("1q") == 14 * DAY_S
    assert p.tau_for("ro") == 7 * DAY_S
    assert p.tau_for("cz") == 7 * DAY_S
    with pytest.raises(ValueError, match="unknown metric family"):
        p.tau_for("3q")


def test_params_validation():
    with pytest.raises(ValueError):
        DriftParams(tau_ro_s=0.0)
    with pytest.raises(ValueError):
        DriftParams(floor_drop=0.0)
    with pytest.raises(ValueError):
        DriftParams(floor_drop=1.0)


def test_default_floor_drop_is_two_points():
    assert DriftParams().floor_drop == 0.02
