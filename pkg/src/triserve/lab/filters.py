"""Trajectory cleanup filters.

Applied in a fixed order: time-jump, position-jump, region, rebound. The
first drops a recording with gaps in its timestamps, the second strips
isolated position outliers, the third cuts samples far off the table, and
the last rejects trajectories without a usable bounce.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from ..trajectory import TableRegion, Trajectory
from .landing import LandingPoint, NoReboundError, estimate_landing

MAX_TIME_GAP_S = 0.5
NEIGHBORHOOD = 15
MAX_NEIGHBOR_DEVIATION_M = 0.05


def filter_time_jump(traj: Trajectory, max_gap: float = MAX_TIME_GAP_S) -> bool:
    """True when the recording has no timestamp gap above max_gap (strict)."""
    if len(traj) < 2:
        raise ValueError("time-jump filter needs at least 2 samples")
    dt = np.diff(traj.times())
    return bool(np.all(dt <= max_gap))


class PositionJumpResult(NamedTuple):
    trajectory: Trajectory
    removed_indices: tuple[int, ...]
    too_short: bool


def filter_position_jump(
    traj: Trajectory,
    neighborhood: int = NEIGHBORHOOD,
    threshold: float = MAX_NEIGHBOR_DEVIATION_M,
) -> PositionJumpResult:
    """Remove samples that deviate from their nearest-in-time peers.

    Each sample is compared to its neighborhood of `neighborhood` closest
    other samples in time. The ball moves several m/s, so the raw neighborhood
    centroid sits far from legitimate samples wherever the window is lopsided
    (track ends) or the path kinks (the bounce); the deviation is therefore
    taken against the centroid transported to the sample's own timestamp, a
    per-axis constant-acceleration least-squares fit of the neighborhood
    evaluated at t_i. Smooth flight yields near-zero deviation everywhere
    while a displaced sample keeps its full offset.

    Decisions are made in a single pass over the original samples, so one
    outlier never drags its neighbors out with it. Trajectories shorter than
    neighborhood + 1 pass through untouched, flagged too_short.
    """
    n = len(traj)
    if n < neighborhood + 1:
        return PositionJumpResult(traj, (), True)

    t = traj.times()
    pos = traj.positions()
    block = neighborhood + 1  # contiguous window holding the sample plus peers
    lo = np.empty(n, dtype=int)
    for i in range(n):
        a, b = i, i
        ti = t[i]
        for _ in range(neighborhood):
            left_gap = ti - t[a - 1] if a > 0 else np.inf
            right_gap = t[b + 1] - ti if b < n - 1 else np.inf
            if left_gap <= right_gap:
                a -= 1
            else:
                b += 1
        lo[i] = a

    idx = lo[:, None] + np.arange(block)[None, :]          # (n, block)
    peers = idx[idx != np.arange(n)[:, None]].reshape(n, neighborhood)
    tau = t[peers] - t[:, None]                            # (n, k)
    basis = np.stack([np.ones_like(tau), tau, tau * tau], axis=-1)  # (n, k, 3)
    gram = np.einsum("nka,nkb->nab", basis, basis)
    rhs = np.einsum("nka,nkx->nax", basis, pos[peers])
    coef = np.linalg.solve(gram, rhs)                      # (n, 3 coef, 3 axes)
    predicted = coef[:, 0, :]                              # fit at tau = 0
    deviation = np.linalg.norm(pos - predicted, axis=1)
    removed = np.nonzero(deviation > threshold)[0]

    if removed.size == 0:
        return PositionJumpResult(traj, (), False)
    removed_set = set(removed.tolist())
    kept = [s for i, s in enumerate(traj.samples) if i not in removed_set]
    return PositionJumpResult(
        traj.replace_samples(kept), tuple(int(i) for i in removed), False
    )


def filter_region(traj: Trajectory, region: Optional[TableRegion] = None) -> Trajectory:
    """Drop samples outside the relaxed table bounds."""
    if region is None:
        region = TableRegion()
    kept = [s for s in traj.samples if region.contains_relaxed(s.x, s.y)]
    if len(kept) == len(traj.samples):
        return traj
    return traj.replace_samples(kept)


class ReboundResult(NamedTuple):
    keep: bool
    landing: Optional[LandingPoint]


def filter_rebound(
    traj: Trajectory,
    keep_misses: bool = False,
    window: int = 5,
    region: Optional[TableRegion] = None,
) -> ReboundResult:
    """Reject trajectories without a credible bounce on the playing surface.

    keep_misses retains everything (balls clipping past the table edges
    included) while still reporting the landing estimate when one exists.
    """
    if region is None:
        region = TableRegion()
    try:
        landing = estimate_landing(traj, window=window, region=region)
    except NoReboundError:
        return ReboundResult(keep_misses, None)
    on_table = landing.valid and region.contains(landing.x, landing.y)
    return ReboundResult(keep_misses or on_table, landing)


@dataclass(frozen=True)
class PipelineResult:
    trajectory: Optional[Trajectory]  # None when the whole recording is dropped
    kept: bool
    drop_reason: Optional[str]
    landing: Optional[LandingPoint]
    flags: tuple[str, ...]


def apply_filters(
    traj: Trajectory,
    region: Optional[TableRegion] = None,
    keep_misses: bool = False,
    window: int = 5,
) -> PipelineResult:
    """Run the full cleanup pipeline on one trajectory.

    The flags list every modification a filter made, replacing the manual
    inspection step of a live capture setup.
    """
    if region is None:
        region = TableRegion()
    flags: list[str] = []

    if len(traj) < 2 or not filter_time_jump(traj):
        return PipelineResult(None, False, "time_jump", None, tuple(flags))

    traj, removed, too_short = filter_position_jump(traj)
    if too_short:
        flags.append("position_jump_skipped_short")
    elif removed:
        flags.append(f"position_jump_removed={len(removed)}")

    before = len(traj)
    traj = filter_region(traj, region)
    if len(traj) != before:
        flags.append(f"region_removed={before - len(traj)}")

    keep, landing = filter_rebound(traj, keep_misses=keep_misses, window=window, region=region)
    if not keep:
        return PipelineResult(None, False, "rebound", landing, tuple(flags))
    if landing is None:
        flags.append("no_rebound_kept")
    elif not (landing.valid and region.contains(landing.x, landing.y)):
        flags.append("miss_kept")
    return PipelineResult(traj, True, None, landing, tuple(flags))
