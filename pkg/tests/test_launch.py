import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from triserve.simcore import (
    LauncherState,
    SimConfig,
    calibrate,
    compute_launch,
    default_curves,
    wheel_speed_at,
)
from triserve.simcore.launch import launch_axis, pinch_noise_multiplier

CFG = SimConfig()


def test_wheel_speed_settling():
    assert wheel_speed_at(1000.0, 3000.0, 0.3) == pytest.approx(3000.0, abs=1e-6)
    assert wheel_speed_at(0.0, 3000.0, 0.3) == 0.0
    # frozen oracle: 3000 * (1 - exp(-1))
    assert wheel_speed_at(0.3, 3000.0, 0.3) == pytest.approx(1896.361676485673, abs=1e-9)
    # continuous mode: settled exactly
    assert wheel_speed_at(None, 3000.0, 0.3) == 3000.0


def test_wheel_speed_preconditions():
    with pytest.raises(ValueError):
        wheel_speed_at(-0.1, 3000.0, 0.3)
    with pytest.raises(ValueError):
        wheel_speed_at(1.0, 3000.0, 0.0)


def test_equal_wheels_no_spin():
    state = LauncherState(wheel_actuation=(55.0, 55.0, 55.0), ramp_up_time="continuous")
    # identical curves so equal actuation means equal surface speeds
    curve = default_curves()[0]
    out = compute_launch(state, CFG, curves=(curve, curve, curve))
    assert out.spin == 0.0


def test_speed_calibration_anchor():
    state = LauncherState(wheel_actuation=(100.0, 100.0, 100.0), ramp_up_time="continuous")
    out = compute_launch(state, CFG)
    assert abs(out.speed - 15.4) < 1e-12


def test_spin_calibration_anchor_is_topspin():
    state = LauncherState(wheel_actuation=(0.0, 100.0, 100.0), ramp_up_time="continuous")
    out = compute_launch(state, CFG)
    assert out.spin == pytest.approx(192.0, abs=1e-9)
    # fast top wheels drag the upper ball surface forward: topspin, +y for +x flight
    assert out.omega0[1] > 190.0


def test_doubled_wheel_radius_halves_cv():
    c_v, _ = calibrate(CFG)
    c_v2, _ = calibrate(CFG.with_values(wheel_radius=2 * CFG.wheel_radius))
    assert c_v2 == pytest.approx(c_v / 2.0, rel=1e-12)


@pytest.mark.xfail(
    strict=True,
    reason="free-running MN4004 curves top out above MN5008, so a shared slip "
    "factor predicts ~18.4 m/s, not the measured 10.8 m/s (loaded launch); "
    "kept as documentation of the data conflict",
)
def test_mn4004_with_mn5008_slip_factor():
    calib = calibrate(CFG)  # fitted on MN5008
    state = LauncherState(wheel_actuation=(100.0, 100.0, 100.0), ramp_up_time="continuous")
    out = compute_launch(state, CFG, curves=default_curves("MN4004"), calib=calib)
    assert out.speed == pytest.approx(10.8, rel=0.15)


def test_degenerate_curves_rejected():
    from triserve.simcore.curves import MotorCurve

    flat = MotorCurve("flat", ((0.0, 0.0), (100.0, 0.0)))
    with pytest.raises(ValueError):
        calibrate(CFG, curves=(flat, flat, flat))


def test_launch_axis_geometry():
    ax = launch_axis(0.0, 0.0)
    assert ax == pytest.approx((1.0, 0.0, 0.0))
    ax = launch_axis(0.0, 90.0 - 1e-9)
    assert ax[2] == pytest.approx(1.0)
    ax = launch_axis(15.0, 19.9)
    assert np.linalg.norm(ax) == pytest.approx(1.0)
    assert ax[1] > 0  # positive azimuth steers left (+y)


@settings(max_examples=40, deadline=None)
@given(
    st.floats(min_value=0.0, max_value=95.0),
    st.floats(min_value=0.1, max_value=5.0),
    st.integers(min_value=0, max_value=2),
)
def test_speed_monotone_in_each_wheel(base, bump, wheel):
    wheels = [base, base, base]
    state_lo = LauncherState(wheel_actuation=tuple(wheels), ramp_up_time="continuous")
    wheels[wheel] = min(100.0, base + bump)
    state_hi = LauncherState(wheel_actuation=tuple(wheels), ramp_up_time="continuous")
    lo = compute_launch(state_lo, CFG)
    hi = compute_launch(state_hi, CFG)
    assert hi.speed >= lo.speed - 1e-12


def test_noise_free_launch_is_deterministic():
    state = LauncherState()
    a = compute_launch(state, CFG)
    b = compute_launch(state, CFG)
    assert a.v0 == b.v0 and a.omega0 == b.omega0


def test_actuation_noise_perturbs_outcome():
    state = LauncherState()
    rng = np.random.default_rng(1)
    a = compute_launch(state, CFG, rng=rng)
    b = compute_launch(state, CFG, rng=rng)
    assert a.v0 != b.v0


def test_pinch_multiplier_u_shape():
    assert pinch_noise_multiplier(37.0) == 1.0
    assert pinch_noise_multiplier(35.3) > pinch_noise_multiplier(36.4) > 1.0
    assert pinch_noise_multiplier(38.6) > pinch_noise_multiplier(37.4) > 1.0


def test_launch_delay_from_state():
    # continuous: stroke plus transit only
    state = LauncherState(stroke_gain=0.1, ramp_up_time="continuous")
    out = compute_launch(state, CFG)
    assert out.launch_delay == pytest.approx(4.21, abs=1e-9)
    # ramp mode adds the ramp wait
    state = LauncherState(stroke_gain=0.1, ramp_up_time=1.5)
    out = compute_launch(state, CFG)
    assert out.launch_delay == pytest.approx(5.71, abs=1e-9)


def test_state_validation():
    with pytest.raises(ValueError):
        LauncherState(wheel_actuation=(101.0, 0.0, 0.0))
    with pytest.raises(ValueError):
        LauncherState(azimuth_deg=-20.0)
    with pytest.raises(ValueError):
        LauncherState(altitude_deg=50.0)
    with pytest.raises(ValueError):
        LauncherState(stroke_gain=0.0)
    with pytest.raises(ValueError):
        LauncherState(ramp_up_time=-1.0)
    with pytest.raises(ValueError):
        LauncherState(ramp_up_time="sometimes")
    with pytest.raises(ValueError):
        LauncherState(pinch_diameter_mm=34.0)
