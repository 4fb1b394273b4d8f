import pytest

from triserve.lab import (
    compute_stats,
    read_trajectories,
    read_trajectory_csv,
    write_stats_csv,
    write_trajectories,
)
from triserve.lab.io import read_stats_csv
from triserve.lab.landing import LandingPoint
from triserve.simcore import LauncherState
from triserve.trajectory import BallSample, Trajectory


def make_traj(traj_id, control=None, t0=0.0):
    samples = [
        BallSample(t=t0 + 0.0055 * i, x=0.1 * i, y=-0.01 * i, z=0.3 - 0.001 * i)
        for i in range(5)
    ]
    return Trajectory(id=traj_id, samples=samples, control=control,
                      launcher_distance_to_table=0.8)


def test_archive_round_trip(tmp_path):
    state = LauncherState(wheel_actuation=(37.0, 40.0, 41.5), azimuth_deg=2.0,
                          ramp_up_time="continuous", stroke_gain=0.5)
    original = [make_traj("a", control=state), make_traj("b", control=None)]
    path = tmp_path / "archive.jsonl"
    assert write_trajectories(path, original) == 2

    loaded = read_trajectories(path)
    assert len(loaded) == 2
    assert loaded[0].id == "a" and loaded[1].id == "b"
    assert loaded[0].samples == original[0].samples  # exact float round trip
    assert loaded[0].control == state
    assert loaded[1].control is None
    assert loaded[0].launcher_distance_to_table == 0.8


def test_sample_before_header_rejected(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"t": 0.0, "x": 1.0, "y": 0.0, "z": 0.3}\n')
    with pytest.raises(ValueError, match="before any header"):
        read_trajectories(path)


def test_unknown_record_rejected(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"id": "a", "launcher_state": null, "distance_m": 0.8}\n'
                    '{"foo": 1}\n')
    with pytest.raises(ValueError, match="unrecognized"):
        read_trajectories(path)


def test_csv_import(tmp_path):
    path = tmp_path / "capture-7.csv"
    path.write_text("t,x,y,z\n0.0,0.1,0.0,0.30\n0.005,0.13,0.0,0.31\n")
    traj = read_trajectory_csv(path)
    assert traj.id == "capture-7"
    assert len(traj) == 2
    assert traj.samples[1] == BallSample(t=0.005, x=0.13, y=0.0, z=0.31)
    assert traj.control is None


def test_csv_requires_columns(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("time,x,y,z\n0.0,0.1,0.0,0.3\n")
    with pytest.raises(ValueError, match="t,x,y,z"):
        read_trajectory_csv(path)


def test_stats_csv_round_trip(tmp_path):
    landings = [LandingPoint(x, y, 0.0, True)
                for x, y in [(1.5, 0.0), (1.52, 0.01), (1.48, -0.02), (1.51, 0.02)]]
    stats = compute_stats(landings)
    path = tmp_path / "stats.csv"
    write_stats_csv(path, [("ramp=0.5", stats)])
    rows = read_stats_csv(path)
    assert len(rows) == 1
    series, loaded = rows[0]
    assert series == "ramp=0.5"
    assert loaded == stats
