"""Synchronous simulator handle for experiments and dataset generation.

Bypasses the network server and the tick clock: each launch computes the
release condition, integrates the flight and observes it with one shared
camera session. Deterministic for a given config, seed and call sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .curves import MotorCurve, default_curves
from .feed import feed_seconds
from .flight import FlightResult, simulate_flight, simulate_flight_batch
from .launch import calibrate, compute_launch
from .observe import Camera
from ..trajectory import Trajectory
from .types import LaunchOutcome, LauncherState, SimConfig


@dataclass
class LaunchRecord:
    outcome: LaunchOutcome
    truth: FlightResult
    measured: Trajectory


class SimSession:
    def __init__(
        self,
        cfg: Optional[SimConfig] = None,
        curves: Optional[Sequence[MotorCurve]] = None,
        seed: Optional[int] = None,
    ):
        self.cfg = cfg if cfg is not None else SimConfig()
        self.curves = tuple(curves) if curves is not None else default_curves()
        self.rng = np.random.default_rng(self.cfg.rng_seed if seed is None else seed)
        self.calib = calibrate(self.cfg, self.curves)
        self.camera = Camera(self.cfg, self.rng)
        self.state = LauncherState()
        self._launch_count = 0

    def set_state(self, state: LauncherState) -> None:
        self.state = state

    def _engagement_time(self, state: LauncherState) -> Optional[float]:
        if state.continuous:
            return None
        t = state.ramp_seconds + feed_seconds(state.stroke_gain)
        if self.cfg.feed_jitter_sd > 0:
            t += self.rng.normal(0.0, self.cfg.feed_jitter_sd)
        return max(t, 0.0)

    def launch(self, state: Optional[LauncherState] = None, jump_first: bool = False) -> LaunchRecord:
        """Fire once. jump_first mirrors the orientation-excursion test mode;
        the excursion has no mechanical effect on the launch itself."""
        if state is not None:
            self.state = state
        state = self.state
        self._launch_count += 1
        outcome = compute_launch(
            state, self.cfg, self._engagement_time(state),
            curves=self.curves, rng=self.rng, calib=self.calib,
        )
        truth = simulate_flight(outcome, self.cfg)
        measured = self.camera.observe(
            truth, traj_id=f"sim-{self._launch_count:05d}", control=state,
            launcher_distance=self.cfg.launcher_distance,
        )
        return LaunchRecord(outcome, truth, measured)

    def launch_batch(self, states: Sequence[LauncherState]) -> list[LaunchRecord]:
        """Fire many launches integrated together; same physics as launch(),
        its own deterministic draw order."""
        outcomes = []
        for state in states:
            self._launch_count += 1
            outcomes.append(
                compute_launch(
                    state, self.cfg, self._engagement_time(state),
                    curves=self.curves, rng=self.rng, calib=self.calib,
                )
            )
        truths = simulate_flight_batch(outcomes, self.cfg)
        base = self._launch_count - len(states)
        records = []
        for k, (state, outcome, truth) in enumerate(zip(states, outcomes, truths)):
            measured = self.camera.observe(
                truth, traj_id=f"sim-{base + k + 1:05d}", control=state,
                launcher_distance=self.cfg.launcher_distance,
            )
            records.append(LaunchRecord(outcome, truth, measured))
        return records
