"""Landing accuracy statistics."""

from __future__ import annotations

from dataclasses import dataclass
from math import hypot, pi
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .landing import LandingPoint


@dataclass(frozen=True)
class AccuracyStats:
    n: int
    mean: tuple[float, float]
    sigma_x: float
    sigma_y: float
    sigma_norm: float   # sqrt(sigma_x^2 + sigma_y^2)
    area_sigma: float   # pi * sigma_x * sigma_y, scatter ellipse area

    @property
    def sigma_avg(self) -> float:
        return 0.5 * (self.sigma_x + self.sigma_y)


def compute_stats(landings: Sequence[LandingPoint]) -> AccuracyStats:
    """Population scatter of landing points; needs at least two of them."""
    if len(landings) < 2:
        raise ValueError(f"need >= 2 landing points, got {len(landings)}")
    x = np.array([p.x for p in landings])
    y = np.array([p.y for p in landings])
    sx = float(np.std(x))  # population, not sample
    sy = float(np.std(y))
    return AccuracyStats(
        n=len(landings),
        mean=(float(x.mean()), float(y.mean())),
        sigma_x=sx,
        sigma_y=sy,
        sigma_norm=hypot(sx, sy),
        area_sigma=pi * sx * sy,
    )


class BootstrapCI(NamedTuple):
    lo: float
    hi: float

    @property
    def contains_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi


def _sigma_avg(x: np.ndarray, y: np.ndarray) -> float:
    return 0.5 * (float(np.std(x)) + float(np.std(y)))


def bootstrap_sigma_diff(
    group_a: Sequence[LandingPoint],
    group_b: Sequence[LandingPoint],
    n_boot: int = 2000,
    alpha: float = 0.05,
    rng: Optional[np.random.Generator] = None,
) -> BootstrapCI:
    """Percentile bootstrap CI for sigma_avg(a) - sigma_avg(b).

    An interval excluding zero marks the scatter difference significant at
    level alpha.
    """
    if len(group_a) < 2 or len(group_b) < 2:
        raise ValueError("both groups need >= 2 landing points")
    if rng is None:
        rng = np.random.default_rng(0)
    ax = np.array([p.x for p in group_a])
    ay = np.array([p.y for p in group_a])
    bx = np.array([p.x for p in group_b])
    by = np.array([p.y for p in group_b])
    na, nb = len(ax), len(bx)
    diffs = np.empty(n_boot)
    for k in range(n_boot):
        ia = rng.integers(0, na, na)
        ib = rng.integers(0, nb, nb)
        diffs[k] = _sigma_avg(ax[ia], ay[ia]) - _sigma_avg(bx[ib], by[ib])
    lo, hi = np.quantile(diffs, [alpha / 2.0, 1.0 - alpha / 2.0])
    return BootstrapCI(float(lo), float(hi))
