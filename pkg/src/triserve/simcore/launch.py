"""Launch kinematics: wheel speeds to ball velocity and spin.

Three wheels sit at 120 degree spacing around the launch tube, contacting the
ball from directions 270 (bottom), 150 (top-left) and 30 (top-right) degrees
in the plane normal to the launch axis. Mean wheel surface speed sets the ball
speed, surface speed differentials set the spin. Both relations carry one
calibrated slip factor each (c_v, c_omega), fitted so that the full-actuation
equal-wheel launch reaches 15.4 m/s and the strongest differential reaches
192.0 rev/s of topspin.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from .curves import MotorCurve, default_curves, interpolate_motor_speed
from .feed import feed_seconds
from .types import LaunchOutcome, LauncherState, SimConfig

# wheel contact directions, degrees in the (e1=right, e2=up) tube plane
WHEEL_ANGLES_DEG = (270.0, 150.0, 30.0)  # bottom, top-left, top-right

# pinch only changes launch repeatability; U-shaped noise multiplier with the
# sweet spot at 37.0 mm
_PINCH_OPTIMUM_MM = 37.0
_PINCH_CURVATURE = 0.2  # per mm^2


def wheel_speed_at(t_since_start: Optional[float], target_speed: float, tau: float) -> float:
    """First-order settling toward target_speed (rev/min).

    t_since_start=None means continuously running motors; returns the target
    exactly.
    """
    if tau <= 0:
        raise ValueError("tau must be > 0")
    if t_since_start is None:
        return target_speed
    if t_since_start < 0:
        raise ValueError("t_since_start must be >= 0")
    return target_speed * (1.0 - math.exp(-t_since_start / tau))


def pinch_noise_multiplier(d_pinch_mm: float) -> float:
    return 1.0 + _PINCH_CURVATURE * (d_pinch_mm - _PINCH_OPTIMUM_MM) ** 2


def launch_axis(azimuth_deg: float, altitude_deg: float) -> tuple[float, float, float]:
    az = math.radians(azimuth_deg)
    alt = math.radians(altitude_deg)
    return (
        math.cos(alt) * math.cos(az),
        math.cos(alt) * math.sin(az),
        math.sin(alt),
    )


def _tube_plane_basis(axis: tuple[float, float, float]):
    """(e1, e2) spanning the plane normal to the launch axis.

    e1 points horizontally to the right as seen from behind the launcher,
    e2 points up. axis never gets near vertical (altitude <= 37.1 deg).
    """
    ax, ay, az = axis
    # e1 = normalize(axis x z_world)
    n = math.hypot(ay, ax)
    e1 = (ay / n, -ax / n, 0.0)
    # e2 = e1 x axis (up-ish)
    e2 = (
        e1[1] * az - 0.0 * ay,
        0.0 * ax - e1[0] * az,
        e1[0] * ay - e1[1] * ax,
    )
    return e1, e2


def _wheel_surface_speeds(
    state: LauncherState,
    cfg: SimConfig,
    curves: Sequence[MotorCurve],
    t_feed: Optional[float],
    rng: Optional[np.random.Generator],
) -> list[float]:
    """Surface speeds (m/s) of the three wheels at ball engagement."""
    mult = pinch_noise_multiplier(state.pinch_diameter_mm)
    speeds = []
    for actuation, curve in zip(state.wheel_actuation, curves):
        a = actuation
        if rng is not None and cfg.actuation_noise_sd > 0:
            a = float(np.clip(a + rng.normal(0.0, cfg.actuation_noise_sd * mult), 0.0, 100.0))
        target = interpolate_motor_speed(curve, a)
        rev_min = wheel_speed_at(t_feed, target, cfg.settle_time_constant)
        speeds.append(2.0 * math.pi * cfg.wheel_radius * rev_min / 60.0)
    return speeds


def _spin_sum(surface_speeds: Sequence[float], axis: tuple[float, float, float]):
    """Sum_i (u_i - mean) * (r_hat_i x axis), the uncalibrated spin direction."""
    e1, e2 = _tube_plane_basis(axis)
    mean = sum(surface_speeds) / 3.0
    total = [0.0, 0.0, 0.0]
    for u, angle in zip(surface_speeds, WHEEL_ANGLES_DEG):
        a = math.radians(angle)
        c, s = math.cos(a), math.sin(a)
        r_hat = (c * e1[0] + s * e2[0], c * e1[1] + s * e2[1], c * e1[2] + s * e2[2])
        tangent = (
            r_hat[1] * axis[2] - r_hat[2] * axis[1],
            r_hat[2] * axis[0] - r_hat[0] * axis[2],
            r_hat[0] * axis[1] - r_hat[1] * axis[0],
        )
        du = u - mean
        total[0] += du * tangent[0]
        total[1] += du * tangent[1]
        total[2] += du * tangent[2]
    return total


def calibrate(
    cfg: SimConfig, curves: Optional[Sequence[MotorCurve]] = None
) -> tuple[float, float]:
    """Fit (c_v, c_omega) to the speed and spin anchors.

    c_v: all wheels at 100 percent, settled, gives exactly 15.4 m/s.
    c_omega: bottom 0 / tops 100 percent, settled, gives exactly 192.0 rev/s.
    """
    if curves is None:
        curves = default_curves()
    factor = 2.0 * math.pi * cfg.wheel_radius / 60.0
    u_max = [factor * c.max_speed for c in curves]
    u_mean = sum(u_max) / 3.0
    if u_mean <= 0:
        raise ValueError("degenerate motor curves: zero top speed")
    c_v = 15.4 / u_mean

    axis = (1.0, 0.0, 0.0)
    diff = [0.0, u_max[1], u_max[2]]  # bottom stopped, both tops flat out
    total = _spin_sum(diff, axis)
    magnitude = math.sqrt(sum(t * t for t in total)) / cfg.ball_radius
    if magnitude <= 0:
        raise ValueError("degenerate motor curves: no spin authority")
    c_omega = 192.0 / magnitude
    return c_v, c_omega


def compute_launch(
    state: LauncherState,
    cfg: SimConfig,
    t_feed: Optional[float] = None,
    curves: Optional[Sequence[MotorCurve]] = None,
    rng: Optional[np.random.Generator] = None,
    calib: Optional[tuple[float, float]] = None,
) -> LaunchOutcome:
    """Ball release state for a launch fired from `state`.

    t_feed is the ball-wheel engagement time since motor start; None derives
    it from the state (ramp-up plus stroke time), which for continuous mode
    means fully settled wheels.
    """
    if curves is None:
        curves = default_curves()
    if calib is None:
        calib = (cfg.calib_speed, cfg.calib_spin)
        if calib[0] is None or calib[1] is None:
            calib = calibrate(cfg, curves)
    c_v, c_omega = calib

    stroke_time = feed_seconds(state.stroke_gain)
    if state.continuous:
        engage = t_feed  # None = settled
        delay = stroke_time
    else:
        engage = state.ramp_seconds + stroke_time if t_feed is None else t_feed
        delay = engage

    speeds = _wheel_surface_speeds(state, cfg, curves, engage, rng)
    mean = sum(speeds) / 3.0
    axis = launch_axis(state.azimuth_deg, state.altitude_deg)
    v = c_v * mean
    total = _spin_sum(speeds, axis)
    k = c_omega / cfg.ball_radius
    return LaunchOutcome(
        v0=(v * axis[0], v * axis[1], v * axis[2]),
        omega0=(k * total[0], k * total[1], k * total[2]),
        release_position=cfg.release_position,
        launch_delay=max(delay, 1e-9),
    )
