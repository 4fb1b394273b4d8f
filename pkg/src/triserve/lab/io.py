"""Trajectory archives and stats export.

Archive format is JSON lines: a header object {"id", "launcher_state",
"distance_m"} opens each trajectory, followed by one {"t","x","y","z"} object
per sample. Several trajectories concatenate into one file. Plain CSV
(t,x,y,z with a header row) imports a single unattributed trajectory.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from ..simcore.types import LauncherState
from ..trajectory import BallSample, Trajectory
from .stats import AccuracyStats

PathLike = Union[str, Path]


def write_trajectories(path: PathLike, trajectories: Iterable[Trajectory]) -> int:
    """Write an archive; returns the number of trajectories written."""
    count = 0
    with open(path, "w") as fh:
        for traj in trajectories:
            header = {
                "id": traj.id,
                "launcher_state": traj.control.as_dict() if traj.control else None,
                "distance_m": traj.launcher_distance_to_table,
            }
            fh.write(json.dumps(header) + "\n")
            for s in traj.samples:
                fh.write(json.dumps({"t": s.t, "x": s.x, "y": s.y, "z": s.z}) + "\n")
            count += 1
    return count


def read_trajectories(path: PathLike) -> list[Trajectory]:
    trajectories: list[Trajectory] = []
    header: Optional[dict] = None
    samples: list[BallSample] = []

    def flush():
        if header is None:
            return
        control = header.get("launcher_state")
        trajectories.append(
            Trajectory(
                id=str(header["id"]),
                samples=samples.copy(),
                control=LauncherState.from_dict(control) if control else None,
                launcher_distance_to_table=float(header.get("distance_m", 0.8)),
            )
        )

    with open(path) as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if "id" in obj:
                flush()
                header = obj
                samples = []
            elif "t" in obj:
                if header is None:
                    raise ValueError(f"{path}:{line_no}: sample before any header")
                samples.append(BallSample(t=obj["t"], x=obj["x"], y=obj["y"], z=obj["z"]))
            else:
                raise ValueError(f"{path}:{line_no}: unrecognized record {obj!r}")
    flush()
    return trajectories


def read_trajectory_csv(path: PathLike, id: Optional[str] = None) -> Trajectory:
    """Import a bare t,x,y,z capture; no launcher state attached."""
    samples = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"t", "x", "y", "z"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise ValueError(f"{path}: CSV header must include t,x,y,z")
        for row in reader:
            samples.append(
                BallSample(
                    t=float(row["t"]), x=float(row["x"]),
                    y=float(row["y"]), z=float(row["z"]),
                )
            )
    traj_id = id if id is not None else Path(path).stem
    return Trajectory(id=traj_id, samples=samples, control=None)


STATS_CSV_FIELDS = (
    "series", "n", "mean_x", "mean_y",
    "sigma_x", "sigma_y", "sigma_norm", "area_sigma",
)


def write_stats_csv(path: PathLike, rows: Sequence[tuple[str, AccuracyStats]]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(STATS_CSV_FIELDS)
        for series, st in rows:
            writer.writerow([
                series, st.n, repr(st.mean[0]), repr(st.mean[1]),
                repr(st.sigma_x), repr(st.sigma_y),
                repr(st.sigma_norm), repr(st.area_sigma),
            ])


def read_stats_csv(path: PathLike) -> list[tuple[str, AccuracyStats]]:
    rows = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            stats = AccuracyStats(
                n=int(row["n"]),
                mean=(float(row["mean_x"]), float(row["mean_y"])),
                sigma_x=float(row["sigma_x"]),
                sigma_y=float(row["sigma_y"]),
                sigma_norm=float(row["sigma_norm"]),
                area_sigma=float(row["area_sigma"]),
            )
            rows.append((row["series"], stats))
    return rows
