"""Simulated training-corpus generation.

Six launch regimes, mirroring how varied the recorded corpus is: one
equal-wheel group for target shooting, one fast high-spin group, one slow
group, and three spread over high, medium, and low altitude bands.  Group
sizes default to the recorded campaign's composition and scale
proportionally when a different total is requested.
"""

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .lab.io import write_trajectories
from .simcore.session import SimSession
from .simcore.types import LauncherState, SimConfig


@dataclass(frozen=True)
class GroupSpec:
    """One launch regime: actuation, wheel spread, and altitude bands."""

    label: str
    n: int
    actuation: Tuple[float, float]
    spread: Tuple[float, float]  # max minus min wheel actuation, percent points
    altitude: Tuple[float, float]
    azimuth: Tuple[float, float] = (-12.0, 12.0)
    spin_style: str = "random"  # "random" or "topspin"


# composition of the recorded corpus: 3761 trajectories in six regimes.
# fast launches only stay on the table when the spin dives them down, so the
# fast group pins the bottom wheel slow (topspin) and keeps the arc flat
DEFAULT_MIX = (
    GroupSpec("equal-wheels", 415, (35.0, 42.0), (0.0, 0.0), (8.0, 32.0)),
    GroupSpec("fast-high-spin", 64, (46.0, 52.0), (3.2, 4.0), (8.0, 12.0), (-8.0, 8.0), "topspin"),
    GroupSpec("slow", 364, (33.0, 38.0), (0.5, 2.0), (8.0, 32.0)),
    GroupSpec("high-altitude", 1103, (34.0, 38.0), (0.5, 3.0), (25.0, 37.1)),
    GroupSpec("medium-altitude", 1385, (34.0, 40.0), (0.5, 2.0), (15.0, 25.0)),
    GroupSpec("low-altitude", 430, (34.0, 40.0), (0.0, 1.0), (6.4, 15.0)),
)


@dataclass(frozen=True)
class GroupResult:
    label: str
    n: int
    n_on_table: int
    path: str


@dataclass(frozen=True)
class DatasetManifest:
    seed: int
    n_total: int
    n_on_table: int
    groups: List[GroupResult]

    @property
    def on_table_fraction(self):
        return self.n_on_table / self.n_total if self.n_total else 0.0


def scale_mix(mix: Sequence[GroupSpec], n: int) -> List[GroupSpec]:
    """Distribute ``n`` over the mix proportionally (largest remainder)."""
    if n < 1:
        raise ValueError("dataset size must be positive")
    total = sum(g.n for g in mix)
    raw = [g.n * n / total for g in mix]
    counts = [int(r) for r in raw]
    short = n - sum(counts)
    for i in sorted(range(len(mix)), key=lambda i: raw[i] - counts[i], reverse=True)[:short]:
        counts[i] += 1
    return [
        GroupSpec(g.label, c, g.actuation, g.spread, g.altitude, g.azimuth)
        for g, c in zip(mix, counts)
        if c > 0
    ]


def draw_state(rng, group: GroupSpec) -> LauncherState:
    base = rng.uniform(*group.actuation)
    spread = rng.uniform(*group.spread)
    if spread > 0 and group.spin_style == "topspin":
        # slow bottom wheel; span of the triple equals the drawn spread
        wheels = base + np.array([-2.0, 1.0, 1.0]) * (spread / 3.0)
    elif spread > 0:
        offsets = rng.uniform(-0.5, 0.5, size=3)
        offsets -= offsets.mean()  # keep the mean actuation at base
        span = offsets.max() - offsets.min()
        wheels = base + offsets * (spread / span)
    else:
        wheels = np.full(3, base)
    return LauncherState(
        wheel_actuation=tuple(np.clip(wheels, 0.0, 100.0)),
        azimuth_deg=rng.uniform(*group.azimuth),
        altitude_deg=rng.uniform(*group.altitude),
        ramp_up_time=2.0,
    )


def generate_dataset(
    out_dir,
    n: int = 3761,
    seed: int = 0,
    mix: Sequence[GroupSpec] = DEFAULT_MIX,
    cfg: Optional[SimConfig] = None,
) -> DatasetManifest:
    """Launch every group, archive one JSONL file per group, write a manifest.

    On-table counts come from the simulation's own contact record, so they
    are exact rather than estimated.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    groups = scale_mix(mix, n)
    rng = np.random.default_rng(seed)
    session = SimSession(cfg=cfg, seed=seed)
    results = []
    total_on = 0
    for group in groups:
        states = [draw_state(rng, group) for _ in range(group.n)]
        records = session.launch_batch(states)
        on_table = sum(1 for r in records if r.truth.contact is not None)
        total_on += on_table
        path = out_dir / f"{group.label}.jsonl"
        write_trajectories(path, [r.measured for r in records])
        results.append(GroupResult(group.label, group.n, on_table, str(path)))
    manifest = DatasetManifest(
        seed=seed,
        n_total=sum(g.n for g in groups),
        n_on_table=total_on,
        groups=results,
    )
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(
            {
                "seed": manifest.seed,
                "n_total": manifest.n_total,
                "n_on_table": manifest.n_on_table,
                "on_table_fraction": manifest.on_table_fraction,
                "groups": [asdict(g) for g in manifest.groups],
            },
            fh,
            indent=2,
        )
        fh.write("\n")
    return manifest


def read_manifest(out_dir) -> DatasetManifest:
    with open(Path(out_dir) / "manifest.json") as fh:
        doc = json.load(fh)
    return DatasetManifest(
        seed=doc["seed"],
        n_total=doc["n_total"],
        n_on_table=doc["n_on_table"],
        groups=[GroupResult(**g) for g in doc["groups"]],
    )
