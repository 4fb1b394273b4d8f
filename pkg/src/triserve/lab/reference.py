"""Published accuracy benchmarks of the physical launcher.

Landing scatter measured on the real device for each control parameter
sweep, kept here as regression anchors for the statistics code and as
comparison targets for simulated sweeps. All lengths in meters; the scatter
ellipse area follows area_sigma = pi * sigma_x * sigma_y.
"""

from __future__ import annotations

from typing import NamedTuple, Union

from ..simcore.types import CONTINUOUS


class RampRow(NamedTuple):
    ramp_up_time: Union[float, str]
    n: int
    sigma_x: float
    sigma_y: float
    area_sigma: float


class StrokeRow(NamedTuple):
    stroke_gain: float
    n: int
    sigma_x: float
    sigma_y: float
    area_sigma: float
    launch_time: float  # s, actuation to release, measured


class PinchRow(NamedTuple):
    pinch_diameter_mm: float
    n: int
    sigma_x: float
    sigma_y: float
    area_sigma: float


class JumpRow(NamedTuple):
    label: str
    n: int
    sigma_x: float
    sigma_y: float


RAMP_SERIES: tuple[RampRow, ...] = (
    RampRow(0.01, 39, 0.0402, 0.0166, 0.002096),
    RampRow(0.05, 32, 0.0400, 0.0143, 0.001797),
    RampRow(0.10, 38, 0.0436, 0.0174, 0.002383),
    RampRow(0.50, 34, 0.0211, 0.0150, 0.000994),
    RampRow(1.00, 34, 0.0243, 0.0172, 0.001313),
    RampRow(2.00, 33, 0.0243, 0.0134, 0.001023),
    RampRow(3.00, 36, 0.0234, 0.0134, 0.000985),
    RampRow(8.00, 40, 0.0247, 0.0173, 0.001342),
    RampRow(CONTINUOUS, 40, 0.0231, 0.0150, 0.001089),
)

STROKE_SERIES: tuple[StrokeRow, ...] = (
    StrokeRow(0.05, 35, 0.0197, 0.0143, 0.00088, 8.83),
    StrokeRow(0.10, 50, 0.0156, 0.0192, 0.00095, 4.21),
    StrokeRow(0.50, 50, 0.0241, 0.0239, 0.00181, 1.60),
    StrokeRow(1.00, 49, 0.0213, 0.0223, 0.00149, 1.39),
    StrokeRow(3.00, 46, 0.0237, 0.0196, 0.00146, 0.81),
    StrokeRow(5.00, 50, 0.0227, 0.0223, 0.00159, 0.61),
    StrokeRow(10.00, 50, 0.0199, 0.0215, 0.00134, 0.67),
    StrokeRow(30.00, 50, 0.0279, 0.0150, 0.00132, 0.62),
)

PINCH_SERIES: tuple[PinchRow, ...] = (
    PinchRow(35.3, 51, 0.03194, 0.03062, 0.00307),
    PinchRow(35.8, 48, 0.01932, 0.02658, 0.00161),
    PinchRow(36.4, 49, 0.01906, 0.02171, 0.00130),
    PinchRow(37.0, 49, 0.01965, 0.02480, 0.00153),
    PinchRow(37.4, 49, 0.01866, 0.02208, 0.00129),
    PinchRow(38.6, 49, 0.02361, 0.02428, 0.00180),
)

# orientation A/B check: sweep the mount to its extreme pose and back before
# each launch, versus leaving it alone
JUMP_SERIES: tuple[JumpRow, ...] = (
    JumpRow("static", 20, 0.0155, 0.0193),
    JumpRow("jump", 20, 0.0195, 0.0176),
)
JUMP_ALTITUDE_DEG = 6.4
JUMP_AZIMUTH_DEG = -15.8

# full-resolution plot samples behind the ramp sweep at 0.5 s, for
# cross-checking the rounded table row
FIG_RAMP_HALF_S_SIGMA_X = 21.1268140636482e-3
FIG_RAMP_HALF_S_SIGMA_Y = 15.0007166933308e-3
