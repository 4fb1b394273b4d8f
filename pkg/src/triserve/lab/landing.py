"""Landing point estimation from a recorded bounce.

The ball's height trace forms a V around the table contact. Two first-order
polynomials fitted to the descending and ascending branches intersect at the
moment of contact; the landing coordinates follow by interpolating the
horizontal track at that time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..trajectory import TableRegion, Trajectory

# fits whose slopes differ by less than this cannot place the intersection
PARALLEL_SLOPE_EPS = 1e-6


class NoReboundError(ValueError):
    """The height trace never descends into a minimum and rises again."""


@dataclass(frozen=True)
class LandingPoint:
    x: float
    y: float
    t_land: float
    valid: bool


def _fit_line(t: np.ndarray, z: np.ndarray) -> tuple[float, float]:
    # returns (slope, intercept) of the least squares line z = slope*t + b
    slope, intercept = np.polyfit(t, z, 1)
    return float(slope), float(intercept)


def estimate_landing(
    traj: Trajectory,
    window: int = 5,
    region: Optional[TableRegion] = TableRegion(),
) -> LandingPoint:
    """Intersect pre- and post-bounce height fits at the lowest sample.

    `window` samples per side feed each fit: the descending fit ends at the
    lowest-height sample inclusive, the ascending fit starts just after it.
    The estimate is flagged invalid when the fitted lines are near-parallel,
    when their intersection falls outside the fitted time span, or when the
    landing leaves `region` (relaxed bounds; pass None to skip that check).

    Raises NoReboundError when the lowest sample sits too close to either end
    of the trajectory for both fits, i.e. the ball never bounced in view.
    """
    if window < 2:
        raise ValueError("window must be >= 2 samples per side")
    samples = traj.samples
    n = len(samples)
    if n < 2 * window:
        raise NoReboundError(f"trajectory {traj.id}: {n} samples < {2 * window}")

    z = np.array([s.z for s in samples])
    pivot = int(np.argmin(z))
    if pivot < window - 1 or pivot + window > n - 1:
        raise NoReboundError(
            f"trajectory {traj.id}: no descent-then-rise around sample {pivot}"
        )

    t = np.array([s.t for s in samples])
    pre = slice(pivot - window + 1, pivot + 1)
    post = slice(pivot + 1, pivot + window + 1)
    slope_pre, b_pre = _fit_line(t[pre], z[pre])
    slope_post, b_post = _fit_line(t[post], z[post])

    if abs(slope_pre - slope_post) < PARALLEL_SLOPE_EPS:
        s = samples[pivot]
        return LandingPoint(x=s.x, y=s.y, t_land=s.t, valid=False)

    t_land = (b_post - b_pre) / (slope_pre - slope_post)
    valid = t[pivot - window + 1] <= t_land <= t[pivot + window]

    # horizontal track interpolated at the contact time
    j = int(np.clip(np.searchsorted(t, t_land) - 1, 0, n - 2))
    span = t[j + 1] - t[j]
    frac = float(np.clip((t_land - t[j]) / span, 0.0, 1.0))
    x = samples[j].x + frac * (samples[j + 1].x - samples[j].x)
    y = samples[j].y + frac * (samples[j + 1].y - samples[j].y)

    if valid and region is not None and not region.contains_relaxed(x, y):
        valid = False
    return LandingPoint(x=x, y=y, t_land=float(t_land), valid=valid)
