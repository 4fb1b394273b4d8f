"""Motor characteristic curves.

Each brushless motor is driven open loop, so the relationship between the
actuation signal (percent) and the steady turning speed (rev/min) is captured
by a measured curve per motor. Speeds between measurement points are linearly
interpolated. Six measured curves ship embedded (two motor types, three wheel
positions each); others can be loaded from CSV.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable


@dataclass(frozen=True)
class MotorCurve:
    motor_id: str
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError(f"{self.motor_id}: empty curve")
        a0, s0 = self.points[0]
        if a0 != 0.0 or s0 != 0.0:
            raise ValueError(f"{self.motor_id}: curve must start at (0, 0)")
        for (a1, s1), (a2, s2) in zip(self.points, self.points[1:]):
            if a2 <= a1:
                raise ValueError(f"{self.motor_id}: actuations not strictly increasing")
            if s2 < s1:
                raise ValueError(f"{self.motor_id}: speeds decrease at {a2}%")
        if any(s < 0 for _, s in self.points):
            raise ValueError(f"{self.motor_id}: negative speed")

    @property
    def max_speed(self) -> float:
        return self.points[-1][1]


def interpolate_motor_speed(curve: MotorCurve, actuation: float) -> float:
    """Piecewise-linear speed lookup, exact at every knot.

    actuation is a percent in [0, 100]; values outside raise ValueError.
    """
    if not 0.0 <= actuation <= 100.0:
        raise ValueError(f"actuation {actuation} outside [0, 100]")
    acts = [a for a, _ in curve.points]
    i = bisect.bisect_left(acts, actuation)
    if i < len(acts) and acts[i] == actuation:
        return curve.points[i][1]
    a0, s0 = curve.points[i - 1]
    a1, s1 = curve.points[i]
    return s0 + (s1 - s0) * (actuation - a0) / (a1 - a0)


def _curve(motor_id: str, speeds_from_zero: Iterable[float]) -> MotorCurve:
    # knots at 5% steps starting from 0
    return MotorCurve(
        motor_id,
        tuple((5.0 * i, float(s)) for i, s in enumerate(speeds_from_zero)),
    )


# Measured turning speeds (rev/min) at actuation 0, 5, ..., 100 percent.
_MN5008_BOTTOM = (0, 0, 0, 0, 0, 0, 524, 1291, 1900, 2369, 2722, 2977, 3184,
                  3331, 3435, 3529, 3613, 3681, 3933, 3957, 3960)
_MN5008_TOP_RIGHT = (0, 0, 0, 0, 0, 0, 470, 1250, 1828, 2325, 2667, 2939, 3149,
                     3299, 3418, 3509, 3600, 3678, 3937, 3961, 3963)
_MN5008_TOP_LEFT = (0, 0, 0, 0, 0, 0, 489, 1278, 1865, 2354, 2694, 2959, 3170,
                    3321, 3434, 3524, 3615, 3688, 3931, 3968, 3970)
_MN4004_BOTTOM = (0, 0, 0, 0, 183, 603, 1260, 1780, 2275, 2665, 3043, 3305,
                  3527, 3706, 3865, 4046, 4210, 4484, 4763, 4962, 4964)
_MN4004_TOP_RIGHT = (0, 0, 0, 0, 0, 253, 963, 1460, 1952, 2346, 2724, 2984,
                     3235, 3429, 3587, 3744, 3871, 3977, 4115, 4385, 4597)
_MN4004_TOP_LEFT = (0, 0, 0, 0, 200, 747, 1430, 1892, 2373, 2669, 3018, 3238,
                    3440, 3601, 3781, 3870, 3950, 4170, 4437, 4615, 4616)


def default_curves(motor: str = "MN5008") -> tuple[MotorCurve, MotorCurve, MotorCurve]:
    """Embedded curves as (bottom, top_left, top_right)."""
    if motor == "MN5008":
        return (
            _curve("MN5008-bottom", _MN5008_BOTTOM),
            _curve("MN5008-top-left", _MN5008_TOP_LEFT),
            _curve("MN5008-top-right", _MN5008_TOP_RIGHT),
        )
    if motor == "MN4004":
        return (
            _curve("MN4004-bottom", _MN4004_BOTTOM),
            _curve("MN4004-top-left", _MN4004_TOP_LEFT),
            _curve("MN4004-top-right", _MN4004_TOP_RIGHT),
        )
    raise ValueError(f"unknown motor type {motor!r}")


def load_motor_curves(path: str | Path) -> list[MotorCurve]:
    """Read curves from CSV: a motor_id header line, then actuation,speed rows.

    Several curves may be concatenated in one file; each non-numeric line
    starts a new curve.
    """
    curves: list[MotorCurve] = []
    motor_id: str | None = None
    points: list[tuple[float, float]] = []

    def flush():
        if motor_id is not None:
            curves.append(MotorCurve(motor_id, tuple(points)))

    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line:
            continue
        head = line.split(",")[0].strip()
        try:
            float(head)
        except ValueError:
            flush()
            motor_id = line.rstrip(",").strip()
            points = []
            continue
        if motor_id is None:
            raise ValueError(f"{path}: data row before motor_id header")
        a_str, s_str = line.split(",")[:2]
        points.append((float(a_str), float(s_str)))
    flush()
    if not curves:
        raise ValueError(f"{path}: no curves found")
    return curves
