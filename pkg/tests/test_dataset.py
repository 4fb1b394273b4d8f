"""Dataset generation: mix scaling, regime draws, archives, manifest."""

import hashlib
import json
from pathlib import Path

import numpy as np
import pytest

from triserve.dataset import (
    DEFAULT_MIX,
    GroupSpec,
    draw_state,
    generate_dataset,
    read_manifest,
    scale_mix,
)
from triserve.lab.io import read_trajectories


class TestMix:
    def test_default_composition(self):
        labels = [g.label for g in DEFAULT_MIX]
        counts = [g.n for g in DEFAULT_MIX]
        assert counts == [415, 64, 364, 1103, 1385, 430]
        assert sum(counts) == 3761
        assert len(set(labels)) == 6

    def test_full_size_scaling_is_identity(self):
        scaled = scale_mix(DEFAULT_MIX, 3761)
        assert [g.n for g in scaled] == [g.n for g in DEFAULT_MIX]

    def test_proportional_scaling(self):
        scaled = scale_mix(DEFAULT_MIX, 100)
        assert sum(g.n for g in scaled) == 100
        for orig, got in zip(DEFAULT_MIX, scaled):
            assert abs(got.n - orig.n * 100 / 3761) < 1.0

    def test_single_trajectory_collapses_to_one_group(self):
        scaled = scale_mix(DEFAULT_MIX, 1)
        assert len(scaled) == 1
        assert scaled[0].n == 1

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            scale_mix(DEFAULT_MIX, 0)


class TestDrawState:
    def test_equal_wheels_group_is_exactly_equal(self):
        rng = np.random.default_rng(0)
        group = DEFAULT_MIX[0]
        for _ in range(20):
            st = draw_state(rng, group)
            assert len(set(st.wheel_actuation)) == 1
            assert group.actuation[0] <= st.wheel_actuation[0] <= group.actuation[1]
            assert group.altitude[0] <= st.altitude_deg <= group.altitude[1]

    def test_random_spread_hits_the_drawn_span(self):
        rng = np.random.default_rng(1)
        group = GroupSpec("g", 0, (36.0, 40.0), (1.0, 2.0), (10.0, 30.0))
        for _ in range(20):
            st = draw_state(rng, group)
            span = max(st.wheel_actuation) - min(st.wheel_actuation)
            assert 1.0 - 1e-9 <= span <= 2.0 + 1e-9
            mean = np.mean(st.wheel_actuation)
            assert group.actuation[0] - 1e-9 <= mean <= group.actuation[1] + 1e-9

    def test_topspin_slows_the_bottom_wheel(self):
        rng = np.random.default_rng(2)
        group = DEFAULT_MIX[1]
        assert group.spin_style == "topspin"
        for _ in range(10):
            st = draw_state(rng, group)
            bottom, left, right = st.wheel_actuation
            assert bottom < left == right


@pytest.fixture(scope="module")
def small_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("ds")
    manifest = generate_dataset(out, n=376, seed=0)
    return out, manifest


class TestGenerate:

    def test_manifest_counts(self, small_run):
        out, manifest = small_run
        assert manifest.n_total == 376
        assert sum(g.n for g in manifest.groups) == 376
        assert manifest.n_on_table == sum(g.n_on_table for g in manifest.groups)
        assert 0.7 <= manifest.on_table_fraction <= 1.0

    def test_archives_round_trip(self, small_run):
        out, manifest = small_run
        for g in manifest.groups:
            trajs = read_trajectories(g.path)
            assert len(trajs) == g.n
            for tr in trajs[:3]:
                assert tr.control is not None
                assert len(tr.samples) > 10

    def test_equal_wheel_archive_is_equal_wheeled(self, small_run):
        out, manifest = small_run
        path = next(g.path for g in manifest.groups if g.label == "equal-wheels")
        for tr in read_trajectories(path):
            assert len(set(tr.control.wheel_actuation)) == 1

    def test_manifest_reads_back(self, small_run):
        out, manifest = small_run
        again = read_manifest(out)
        assert again.n_total == manifest.n_total
        assert again.n_on_table == manifest.n_on_table
        assert [g.label for g in again.groups] == [g.label for g in manifest.groups]
        doc = json.loads((Path(out) / "manifest.json").read_text())
        assert 0.0 < doc["on_table_fraction"] < 1.0

    def test_same_seed_same_bytes(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        generate_dataset(a, n=40, seed=3)
        generate_dataset(b, n=40, seed=3)
        for name in sorted(p.name for p in a.glob("*.jsonl")):
            ha = hashlib.sha256((a / name).read_bytes()).hexdigest()
            hb = hashlib.sha256((b / name).read_bytes()).hexdigest()
            assert ha == hb, name

    def test_single_trajectory_run(self, tmp_path):
        manifest = generate_dataset(tmp_path, n=1, seed=0)
        assert manifest.n_total == 1
        assert len(manifest.groups) == 1
        files = list(tmp_path.glob("*.jsonl"))
        assert len(files) == 1
