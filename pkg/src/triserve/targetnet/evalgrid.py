"""Closed-loop evaluation: predict controls, launch, measure landing error."""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..lab.filters import filter_position_jump
from ..lab.landing import NoReboundError, estimate_landing
from ..simcore.types import LauncherState

# 5 downrange stations by 4 cross-table stations, all well inside the table
GRID_X_RANGE = (1.57, 2.60)
GRID_Y_RANGE = (-0.55, 0.55)
GRID_SHAPE = (5, 4)

# ball center height when resting on the table plane
QUERY_HEIGHT = 0.02


def target_grid(
    x_range=GRID_X_RANGE,
    y_range=GRID_Y_RANGE,
    shape=GRID_SHAPE,
) -> np.ndarray:
    """The (20, 2) array of evaluation targets, x-major."""
    xs = np.linspace(x_range[0], x_range[1], shape[0])
    ys = np.linspace(y_range[0], y_range[1], shape[1])
    return np.array([(x, y) for x in xs for y in ys])


@dataclass(frozen=True)
class TargetOutcome:
    target: Tuple[float, float]
    controls: Tuple[float, float, float]
    landing: Optional[Tuple[float, float]]
    error: Optional[float]


@dataclass(frozen=True)
class GridEvaluation:
    outcomes: List[TargetOutcome]
    mean_error: float
    n_missed: int

    @property
    def errors(self):
        return [o.error for o in self.outcomes if o.error is not None]


def evaluate_grid(
    model,
    session,
    grid: Optional[np.ndarray] = None,
    query_z: float = QUERY_HEIGHT,
    state_template: Optional[LauncherState] = None,
    window: int = 5,
) -> GridEvaluation:
    """Shoot at every grid target with model-predicted controls.

    Each prediction is turned into a launcher state (equal wheels), launched
    through ``session``, and the measured trajectory's landing is compared to
    the target.  A launch whose landing cannot be estimated counts as a miss
    and poisons ``mean_error`` with NaN rather than being silently dropped.
    """
    if grid is None:
        grid = target_grid()
    template = state_template or LauncherState(ramp_up_time=2.0)
    outcomes = []
    n_missed = 0
    for tx, ty in np.asarray(grid, dtype=np.float64):
        tx, ty = float(tx), float(ty)
        az, alt, act = (float(v) for v in model.predict(np.array([tx, ty, query_z])))
        state = template.with_values(
            wheel_actuation=(act, act, act),
            azimuth_deg=az,
            altitude_deg=alt,
        )
        record = session.launch(state)
        landing = None
        try:
            cleaned = filter_position_jump(record.measured).trajectory
            est = estimate_landing(cleaned, window=window, region=None)
            if est.valid:
                landing = (est.x, est.y)
        except (NoReboundError, ValueError):
            landing = None
        if landing is None:
            n_missed += 1
            outcomes.append(TargetOutcome((tx, ty), (az, alt, act), None, None))
        else:
            err = float(np.hypot(landing[0] - tx, landing[1] - ty))
            outcomes.append(TargetOutcome((tx, ty), (az, alt, act), landing, err))
    if n_missed:
        mean_error = float("nan")
    else:
        mean_error = float(np.mean([o.error for o in outcomes]))
    return GridEvaluation(outcomes=outcomes, mean_error=mean_error, n_missed=n_missed)


REPORT_FIELDS = [
    "target_x", "target_y", "azimuth_deg", "altitude_deg", "actuation",
    "landing_x", "landing_y", "error",
]


def write_grid_report(path, evaluation: GridEvaluation) -> None:
    """One CSV row per target; missed launches leave the landing cells empty."""
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_FIELDS)
        for o in evaluation.outcomes:
            row = [repr(float(v)) for v in (*o.target, *o.controls)]
            if o.landing is None:
                row += ["", "", ""]
            else:
                row += [repr(float(o.landing[0])), repr(float(o.landing[1])),
                        repr(float(o.error))]
            writer.writerow(row)


def read_grid_report(path) -> GridEvaluation:
    import csv

    outcomes = []
    n_missed = 0
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            target = (float(row["target_x"]), float(row["target_y"]))
            controls = (float(row["azimuth_deg"]), float(row["altitude_deg"]),
                        float(row["actuation"]))
            if row["landing_x"] == "":
                outcomes.append(TargetOutcome(target, controls, None, None))
                n_missed += 1
            else:
                landing = (float(row["landing_x"]), float(row["landing_y"]))
                outcomes.append(TargetOutcome(target, controls, landing, float(row["error"])))
    if n_missed or not outcomes:
        mean_error = float("nan")
    else:
        mean_error = float(np.mean([o.error for o in outcomes]))
    return GridEvaluation(outcomes=outcomes, mean_error=mean_error, n_missed=n_missed)
