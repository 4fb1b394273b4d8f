"""Launcher state and simulation configuration."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Union

CONTINUOUS = "continuous"

AZIMUTH_RANGE = (-15.8, 15.6)
ALTITUDE_RANGE = (6.4, 37.1)
PINCH_RANGE = (35.0, 40.0)

# Ball speed and spin never exceed these, wheel slip included.
MAX_BALL_SPEED = 16.0     # m/s
MAX_BALL_SPIN = 200.0     # rev/s


@dataclass(frozen=True)
class LauncherState:
    """Full controllable state of the launcher.

    wheel_actuation is (bottom, top_left, top_right) percent. ramp_up_time is
    seconds of motor settling before the feed engages, or "continuous" to keep
    the wheels permanently at speed.
    """

    wheel_actuation: tuple[float, float, float] = (40.0, 40.0, 40.0)
    azimuth_deg: float = 0.0
    altitude_deg: float = 19.9
    stroke_gain: float = 1.0
    ramp_up_time: Union[float, str] = 2.0
    pinch_diameter_mm: float = 37.0

    def __post_init__(self):
        if len(self.wheel_actuation) != 3:
            raise ValueError("wheel_actuation needs exactly 3 values")
        for a in self.wheel_actuation:
            if not (math.isfinite(a) and 0.0 <= a <= 100.0):
                raise ValueError(f"wheel actuation {a} outside [0, 100]")
        if not AZIMUTH_RANGE[0] <= self.azimuth_deg <= AZIMUTH_RANGE[1]:
            raise ValueError(f"azimuth {self.azimuth_deg} outside {AZIMUTH_RANGE}")
        if not ALTITUDE_RANGE[0] <= self.altitude_deg <= ALTITUDE_RANGE[1]:
            raise ValueError(f"altitude {self.altitude_deg} outside {ALTITUDE_RANGE}")
        if not (math.isfinite(self.stroke_gain) and self.stroke_gain > 0):
            raise ValueError(f"stroke_gain {self.stroke_gain} must be > 0")
        if self.ramp_up_time != CONTINUOUS:
            t = self.ramp_up_time
            if not (isinstance(t, (int, float)) and math.isfinite(t) and t >= 0):
                raise ValueError(f"ramp_up_time {t!r} must be >= 0 s or 'continuous'")
        if not PINCH_RANGE[0] <= self.pinch_diameter_mm <= PINCH_RANGE[1]:
            raise ValueError(f"pinch diameter {self.pinch_diameter_mm} outside {PINCH_RANGE}")

    @property
    def continuous(self) -> bool:
        return self.ramp_up_time == CONTINUOUS

    @property
    def ramp_seconds(self) -> float:
        return 0.0 if self.continuous else float(self.ramp_up_time)

    def with_values(self, **kw) -> "LauncherState":
        return replace(self, **kw)

    def as_dict(self) -> dict:
        return {
            "wheel_actuation": list(self.wheel_actuation),
            "azimuth_deg": self.azimuth_deg,
            "altitude_deg": self.altitude_deg,
            "stroke_gain": self.stroke_gain,
            "ramp_up_time": self.ramp_up_time,
            "pinch_diameter_mm": self.pinch_diameter_mm,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LauncherState":
        kw = dict(d)
        if "wheel_actuation" in kw:
            kw["wheel_actuation"] = tuple(float(a) for a in kw["wheel_actuation"])
        return cls(**kw)


@dataclass(frozen=True)
class LaunchOutcome:
    """Ball release condition handed to the flight integrator."""

    v0: tuple[float, float, float]          # m/s
    omega0: tuple[float, float, float]      # rev/s
    release_position: tuple[float, float, float]  # m
    launch_delay: float                     # s, actuation start to release

    def __post_init__(self):
        if _norm(self.v0) > MAX_BALL_SPEED + 1e-9:
            raise ValueError(f"|v0| {_norm(self.v0):.3f} exceeds {MAX_BALL_SPEED} m/s")
        if _norm(self.omega0) > MAX_BALL_SPIN + 1e-9:
            raise ValueError(f"|omega0| {_norm(self.omega0):.3f} exceeds {MAX_BALL_SPIN} rev/s")
        if not self.launch_delay > 0:
            raise ValueError("launch_delay must be > 0")

    @property
    def speed(self) -> float:
        return _norm(self.v0)

    @property
    def spin(self) -> float:
        return _norm(self.omega0)


def _norm(v: tuple[float, float, float]) -> float:
    return math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])


@dataclass(frozen=True)
class FeedState:
    """Observable state of the ball feeding system."""

    queue_length: int = 5
    clogged: bool = False
    stroke_angle: float = 0.0   # degrees
    sensor_filled: bool = True

    def __post_init__(self):
        if self.queue_length < 0:
            raise ValueError("queue_length must be >= 0")
        if self.sensor_filled and self.queue_length < 1:
            raise ValueError("sensor_filled requires queue_length >= 1")


@dataclass(frozen=True)
class SimConfig:
    """Physical and noise parameters of the simulated launcher.

    Camera noise is split into a per-session systematic scale error
    (camera_noise, per axis, per meter of distance from the origin; drawn once
    per observation session the way a fixed rig calibration error would be)
    and a small per-sample white jitter (camera_white_sd, also per meter).
    """

    wheel_radius: float = 0.025
    ball_radius: float = 0.020
    ball_mass: float = 0.0027
    drag_coefficient: float = 0.40
    magnus_coefficient: float = 1.0
    air_density: float = 1.204
    gravity: float = 9.81
    restitution_z: float = 0.87
    restitution_xy: float = 0.75

    calib_speed: float | None = None   # c_v, None = calibrate on demand
    calib_spin: float | None = None    # c_omega

    settle_time_constant: float = 0.3  # s
    actuation_noise_sd: float = 0.05   # percent points
    feed_jitter_sd: float = 0.09       # s, engagement time scatter

    camera_noise: tuple[float, float, float] = (0.024, 0.011, 0.001)  # m per m
    camera_white_sd: float = 0.004     # m per m
    outlier_rate: float = 0.001        # per sample
    sample_rate: float = 200.0         # Hz, nominal

    launcher_distance: float = 0.8     # m before the table frontend
    release_height: float = 0.30       # m above the table plane

    flight_dt: float = 0.001           # s
    max_flight_time: float = 5.0       # s
    post_bounce_time: float = 0.3      # s

    clog_probability: float = 0.02     # per launch
    rng_seed: int = 0

    def __post_init__(self):
        positive = {
            "wheel_radius": self.wheel_radius,
            "ball_radius": self.ball_radius,
            "ball_mass": self.ball_mass,
            "air_density": self.air_density,
            "gravity": self.gravity,
            "settle_time_constant": self.settle_time_constant,
            "sample_rate": self.sample_rate,
            "flight_dt": self.flight_dt,
            "max_flight_time": self.max_flight_time,
        }
        for name, value in positive.items():
            if not value > 0:
                raise ValueError(f"{name} must be > 0")
        for name, value in (
            ("drag_coefficient", self.drag_coefficient),
            ("magnus_coefficient", self.magnus_coefficient),
            ("actuation_noise_sd", self.actuation_noise_sd),
            ("feed_jitter_sd", self.feed_jitter_sd),
            ("camera_white_sd", self.camera_white_sd),
            ("outlier_rate", self.outlier_rate),
            ("clog_probability", self.clog_probability),
            ("post_bounce_time", self.post_bounce_time),
        ):
            if value < 0:
                raise ValueError(f"{name} must be >= 0")
        if not 0 < self.restitution_z <= 1 or not 0 < self.restitution_xy <= 1:
            raise ValueError("restitution factors must be in (0, 1]")
        if any(c < 0 for c in self.camera_noise):
            raise ValueError("camera_noise components must be >= 0")
        if not 0 <= self.clog_probability <= 1 or not 0 <= self.outlier_rate <= 1:
            raise ValueError("probabilities must be in [0, 1]")

    @property
    def release_position(self) -> tuple[float, float, float]:
        return (-self.launcher_distance, 0.0, self.release_height)

    @property
    def ball_cross_section(self) -> float:
        return math.pi * self.ball_radius ** 2

    def with_values(self, **kw) -> "SimConfig":
        return replace(self, **kw)
