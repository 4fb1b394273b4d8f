"""Shared trajectory types.

Coordinate frame: origin at the center of the table frontend edge, on the
playing surface. x runs along the long edge of the table toward the far end,
y along the short edge (left positive when looking downrange), z up. The
table plane is z = 0; the launcher sits at negative x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional

import numpy as np

if TYPE_CHECKING:
    from .simcore.types import LauncherState


@dataclass(frozen=True, slots=True)
class BallSample:
    """One time-stamped ball center position, seconds and meters."""

    t: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.t, self.x, self.y, self.z))):
            raise ValueError(f"non-finite sample: {self!r}")

    @property
    def position(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass
class Trajectory:
    """Time-ordered ball samples plus the control values that produced them."""

    id: str
    samples: list[BallSample]
    control: Optional["LauncherState"] = None
    launcher_distance_to_table: float = 0.8

    def __post_init__(self):
        for a, b in zip(self.samples, self.samples[1:]):
            if b.t <= a.t:
                raise ValueError(
                    f"trajectory {self.id}: samples not strictly increasing in t "
                    f"({a.t} then {b.t})"
                )

    def __len__(self) -> int:
        return len(self.samples)

    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    def positions(self) -> np.ndarray:
        """(n, 3) array of positions."""
        return np.array([[s.x, s.y, s.z] for s in self.samples])

    def replace_samples(self, samples: list[BallSample]) -> "Trajectory":
        return Trajectory(
            id=self.id,
            samples=samples,
            control=self.control,
            launcher_distance_to_table=self.launcher_distance_to_table,
        )


@dataclass(frozen=True)
class TableRegion:
    """ITTF table dimensions plus the relaxation margins used by the region filter."""

    length: float = 2.74
    width: float = 1.525
    height: float = 0.76
    margin_x: float = 0.5
    margin_y: float = 0.5

    def __post_init__(self):
        if self.margin_x < 0 or self.margin_y < 0:
            raise ValueError("relaxation margins must be >= 0")

    def contains(self, x: float, y: float) -> bool:
        """Inside the unrelaxed playing surface (launcher half excluded at x < 0)."""
        return 0.0 <= x <= self.length and abs(y) <= self.width / 2.0

    def contains_relaxed(self, x: float, y: float) -> bool:
        return abs(x) <= self.length + self.margin_x and abs(y) <= self.width / 2.0 + self.margin_y
