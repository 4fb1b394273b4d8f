"""Training data extraction from processed trajectories.

Each trajectory that ends in a table contact contributes one row per sample
recorded before that contact: the row input is the ball position and the row
target is the control triple (azimuth, altitude, wheel actuation) that
produced the flight.  Samples after the rebound trace a different dynamical
regime and are excluded.
"""

from typing import Iterable, NamedTuple

import numpy as np

from ..lab.landing import NoReboundError, estimate_landing
from ..trajectory import Trajectory

_EQUAL_WHEEL_TOL = 1e-9


class TrainingRow(NamedTuple):
    position: tuple
    controls: tuple


class TrainingSet:
    """Column-major view of the extracted rows."""

    def __init__(self, inputs: np.ndarray, targets: np.ndarray, n_trajectories: int = 0):
        inputs = np.asarray(inputs, dtype=np.float64)
        targets = np.asarray(targets, dtype=np.float64)
        if inputs.ndim != 2 or targets.ndim != 2 or len(inputs) != len(targets):
            raise ValueError("inputs and targets must be equal-length 2-d arrays")
        self.inputs = inputs
        self.targets = targets
        self.n_trajectories = n_trajectories

    def __len__(self):
        return len(self.inputs)

    def rows(self):
        for x, y in zip(self.inputs, self.targets):
            yield TrainingRow(position=tuple(x), controls=tuple(y))


def _control_target(control, equal_wheels_only):
    wheels = control.wheel_actuation
    spread = max(wheels) - min(wheels)
    if equal_wheels_only and spread > _EQUAL_WHEEL_TOL:
        return None
    actuation = float(np.mean(wheels))
    return (control.azimuth_deg, control.altitude_deg, actuation)


def build_training_set(
    trajectories: Iterable[Trajectory],
    equal_wheels_only: bool = True,
    window: int = 5,
) -> TrainingSet:
    """Extract (position -> controls) rows from pre-rebound samples.

    Trajectories without a control record or, when ``equal_wheels_only`` is
    set, with unequal wheel actuations contribute no rows.  Trajectories
    whose rebound cannot be located are skipped as well.  Raises ValueError
    if nothing usable remains.
    """
    inputs, targets = [], []
    used = 0
    for traj in trajectories:
        if traj.control is None:
            continue
        target = _control_target(traj.control, equal_wheels_only)
        if target is None:
            continue
        try:
            landing = estimate_landing(traj, window=window, region=None)
        except (NoReboundError, ValueError):
            continue
        if not landing.valid:
            continue
        took = 0
        for s in traj.samples:
            if s.t > landing.t_land:
                break
            inputs.append((s.x, s.y, s.z))
            targets.append(target)
            took += 1
        if took:
            used += 1
    if not inputs:
        raise ValueError("no training rows: no usable trajectories")
    return TrainingSet(np.array(inputs), np.array(targets), n_trajectories=used)
