"""Accuracy experiment orchestration.

Fires a batch of launches at a fixed launcher state, pipes the observed
trajectories through the cleanup filters, and reduces the surviving landing
points to scatter statistics. Works against anything exposing the launch
session protocol: launch(state, jump_first=...) returning a record with a
measured trajectory, as the simulator session and the remote client both do.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..simcore.types import LauncherState
from ..trajectory import TableRegion, Trajectory
from .filters import apply_filters
from .landing import LandingPoint
from .stats import AccuracyStats, compute_stats


@dataclass(frozen=True)
class ExperimentResult:
    stats: AccuracyStats
    landings: tuple[LandingPoint, ...]
    n_launched: int
    n_dropped: int
    flag_report: tuple[str, ...]  # "trajectory-id: flag" lines, one per modification


def process_trajectories(
    trajectories: Sequence[Trajectory],
    region: Optional[TableRegion] = None,
    keep_misses: bool = False,
    window: int = 5,
) -> tuple[list[LandingPoint], int, list[str]]:
    """Filter a batch and collect valid landings, drop count and flags."""
    landings: list[LandingPoint] = []
    flags: list[str] = []
    dropped = 0
    for traj in trajectories:
        result = apply_filters(traj, region=region, keep_misses=keep_misses, window=window)
        flags.extend(f"{traj.id}: {f}" for f in result.flags)
        if not result.kept:
            dropped += 1
            continue
        if result.landing is not None and result.landing.valid:
            landings.append(result.landing)
    return landings, dropped, flags


def run_accuracy_experiment(
    session,
    state: LauncherState,
    n_launches: int,
    jump: bool = False,
    keep_misses: bool = False,
    window: int = 5,
    region: Optional[TableRegion] = None,
) -> ExperimentResult:
    """Launch n times at a fixed state and reduce the landings to stats.

    session is a simulated launcher or a "host:port" endpoint of a live
    server.  jump=True sweeps the launch unit to its extreme orientation and
    back before every launch, the wear check used on the physical device.
    """
    if n_launches < 1:
        raise ValueError("n_launches must be >= 1")
    if isinstance(session, str):
        from ..client import RemoteSession  # runtime import, lab stays server-free

        with RemoteSession(session) as live:
            return run_accuracy_experiment(
                live, state, n_launches,
                jump=jump, keep_misses=keep_misses, window=window, region=region,
            )
    trajectories = []
    for _ in range(n_launches):
        record = session.launch(state, jump_first=jump)
        trajectories.append(record.measured)
    landings, dropped, flags = process_trajectories(
        trajectories, region=region, keep_misses=keep_misses, window=window
    )
    stats = compute_stats(landings)
    return ExperimentResult(
        stats=stats,
        landings=tuple(landings),
        n_launched=n_launches,
        n_dropped=dropped,
        flag_report=tuple(flags),
    )


def sweep_parameter(
    session,
    state: LauncherState,
    field: str,
    values: Sequence,
    n_launches: int,
    **kwargs,
) -> list[tuple[object, ExperimentResult]]:
    """Run one experiment per value of a single launcher-state field."""
    results = []
    for value in values:
        swept = state.with_values(**{field: value})
        results.append((value, run_accuracy_experiment(session, swept, n_launches, **kwargs)))
    return results
