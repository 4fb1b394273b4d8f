"""Camera observation model.

The tracking system resamples the true flight at irregular intervals (4.5 to
6.5 ms, most mass near 5.5 ms) and reports ball positions with errors that
grow with distance from the table frontend origin. The dominant error of such
a rig is its calibration: a fixed, direction-dependent scale error that stays
put for a whole recording session. Camera models one session; its systematic
per-axis scale error is drawn once at construction with sd equal to
cfg.camera_noise (m per m). On top of that every sample gets a small white
jitter (cfg.camera_white_sd, also per meter) and, at cfg.outlier_rate, a
gross displacement for filter testing.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from ..trajectory import BallSample, Trajectory
from .flight import FlightResult
from .types import SimConfig


class Camera:
    """One recording session of the measurement system."""

    def __init__(self, cfg: SimConfig, rng: np.random.Generator):
        self.cfg = cfg
        self.rng = rng
        self.scale_error = rng.normal(0.0, cfg.camera_noise, size=3)

    def observe(self, truth: FlightResult | Trajectory, traj_id: str = "measured",
                control=None, launcher_distance: float = 0.8) -> Trajectory:
        cfg = self.cfg
        rng = self.rng
        if isinstance(truth, Trajectory):
            t_true = truth.times()
            p_true = truth.positions()
            control = control if control is not None else truth.control
            launcher_distance = truth.launcher_distance_to_table
        else:
            t_true = truth.times
            p_true = truth.positions

        t0, t1 = float(t_true[0]), float(t_true[-1])
        # triangular inter-sample interval: bounded by the histogram range,
        # peaked at its center
        ts = [t0]
        while True:
            nxt = ts[-1] + rng.triangular(0.0045, 0.0055, 0.0065)
            if nxt > t1:
                break
            ts.append(nxt)
        ts = np.array(ts)

        pos = np.empty((len(ts), 3))
        for k in range(3):
            pos[:, k] = np.interp(ts, t_true, p_true[:, k])

        dist = np.sqrt((pos * pos).sum(axis=1))
        pos = pos + self.scale_error[None, :] * dist[:, None]
        if cfg.camera_white_sd > 0:
            pos = pos + rng.normal(0.0, 1.0, size=pos.shape) * (
                cfg.camera_white_sd * dist[:, None]
            )
        if cfg.outlier_rate > 0:
            hit = rng.random(len(ts)) < cfg.outlier_rate
            for i in np.nonzero(hit)[0]:
                direction = rng.normal(size=3)
                direction /= np.linalg.norm(direction)
                pos[i] += direction * rng.uniform(0.08, 0.30)

        samples = [
            BallSample(float(t), float(p[0]), float(p[1]), float(p[2]))
            for t, p in zip(ts, pos)
        ]
        return Trajectory(traj_id, samples, control, launcher_distance)


def observe(
    truth: FlightResult | Trajectory,
    cfg: SimConfig,
    rng: Optional[np.random.Generator] = None,
    camera: Optional[Camera] = None,
    traj_id: str = "measured",
    control=None,
) -> Trajectory:
    """Observe one flight. Without an explicit camera a fresh session (fresh
    systematic error draw) is created per call."""
    if camera is None:
        if rng is None:
            rng = np.random.default_rng(cfg.rng_seed)
        camera = Camera(cfg, rng)
    return camera.observe(truth, traj_id=traj_id, control=control)
