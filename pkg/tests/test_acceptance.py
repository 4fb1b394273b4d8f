"""Release gate: one end-to-end check per headline capability.

Each test exercises a full slice of the package against a fixed oracle and
enforces a wall-clock budget, so a plain ``pytest tests/test_acceptance.py -v``
prints one pass/fail line per shipping requirement.
"""

import asyncio
import contextlib
import dataclasses
import json
import math
import random
import socket
import time

import numpy as np
import pytest

from triserve.client import ClientSession
from triserve.dataset import generate_dataset
from triserve.lab.experiment import run_accuracy_experiment
from triserve.lab.filters import apply_filters, filter_position_jump
from triserve.lab.landing import estimate_landing
from triserve.lab.reference import (
    FIG_RAMP_HALF_S_SIGMA_X,
    FIG_RAMP_HALF_S_SIGMA_Y,
    PINCH_SERIES,
    RAMP_SERIES,
    STROKE_SERIES,
)
from triserve.lab.stats import bootstrap_sigma_diff
from triserve.server.core import LauncherService, ServerConfig
from triserve.server.tcp import serve_tcp
from triserve.simcore import LauncherState, SimConfig, compute_launch, default_curves
from triserve.simcore.curves import interpolate_motor_speed
from triserve.simcore.session import SimSession
from triserve.targetnet import Mlp, build_training_set, desk_config, evaluate_grid, train

QUIET = SimConfig(
    actuation_noise_sd=0.0,
    feed_jitter_sd=0.0,
    camera_noise=(0.0, 0.0, 0.0),
    camera_white_sd=0.0,
    outlier_rate=0.0,
)


@contextlib.contextmanager
def budget(seconds):
    t0 = time.monotonic()
    yield
    elapsed = time.monotonic() - t0
    assert elapsed < seconds, f"took {elapsed:.1f}s, budget {seconds:.0f}s"


def test_published_scatter_tables_self_consistent():
    """Every published scatter row satisfies area = pi * sx * sy within 2%."""
    with budget(1.0):
        rows = list(RAMP_SERIES) + list(STROKE_SERIES) + list(PINCH_SERIES)
        assert len(rows) == 9 + 8 + 6
        for row in rows:
            assert math.pi * row.sigma_x * row.sigma_y == pytest.approx(
                row.area_sigma, rel=0.02
            )
        # half-second ramp row agrees with the figure tick readout
        half = next(r for r in RAMP_SERIES if r.ramp_up_time == 0.5)
        assert FIG_RAMP_HALF_S_SIGMA_X == pytest.approx(21.13e-3, abs=5e-6)
        assert FIG_RAMP_HALF_S_SIGMA_Y == pytest.approx(15.00e-3, abs=5e-6)
        assert half.sigma_x == pytest.approx(FIG_RAMP_HALF_S_SIGMA_X, abs=5e-5)
        assert half.sigma_y == pytest.approx(FIG_RAMP_HALF_S_SIGMA_Y, abs=5e-5)


def test_motor_interpolation_exact_at_every_knot():
    with budget(1.0):
        curves = default_curves("MN5008") + default_curves("MN4004")
        assert len(curves) == 6
        for curve in curves:
            for actuation, speed in curve.points:
                assert interpolate_motor_speed(curve, actuation) == speed
        bottom = default_curves("MN5008")[0]
        assert interpolate_motor_speed(bottom, 32.5) == pytest.approx(907.5, abs=1e-12)


def test_launch_calibration_anchors():
    """Full throttle hits the measured speed and spin ceilings exactly."""
    with budget(1.0):
        cfg = SimConfig()
        flat_out = LauncherState(
            wheel_actuation=(100.0, 100.0, 100.0), ramp_up_time="continuous"
        )
        assert abs(compute_launch(flat_out, cfg).speed - 15.4) < 1e-12
        max_diff = LauncherState(
            wheel_actuation=(0.0, 100.0, 100.0), ramp_up_time="continuous"
        )
        assert compute_launch(max_diff, cfg).spin == pytest.approx(192.0, abs=1e-9)


def test_landing_estimate_matches_integrator_crossing():
    """Polynomial landing within 5 mm of the true table-plane crossing."""
    with budget(10.0):
        session = SimSession(QUIET, seed=7)
        worst = 0.0
        for altitude in np.linspace(6.4, 37.1, 100):
            record = session.launch(
                LauncherState(
                    wheel_actuation=(38.0, 38.0, 38.0),
                    altitude_deg=float(altitude),
                    ramp_up_time=2.0,
                )
            )
            assert record.truth.contact is not None, f"missed table at {altitude:.1f} deg"
            landing = estimate_landing(record.measured, window=5, region=None)
            err = math.hypot(
                landing.x - record.truth.contact.x, landing.y - record.truth.contact.y
            )
            worst = max(worst, err)
        assert worst < 0.005, f"worst landing error {worst * 1000:.2f} mm"


def test_filter_defect_injection():
    """Injected defects are always caught, clean samples almost never are."""
    with budget(30.0):
        state = LauncherState(wheel_actuation=(37.0, 37.0, 37.0), ramp_up_time=2.0)
        session = SimSession(SimConfig(outlier_rate=0.0), seed=3)
        trajectories = [session.launch(state).measured for _ in range(1000)]
        rng = np.random.default_rng(11)

        # false removals: with outliers disabled every removal is spurious
        total = removed = 0
        for traj in trajectories:
            total += len(traj)
            removed += len(filter_position_jump(traj).removed_indices)
        assert removed / total < 0.005, f"{removed}/{total} clean samples removed"

        # a > 0.5 s recording gap must drop the whole trajectory
        for traj in trajectories:
            i = int(rng.integers(5, len(traj) - 5))
            tail = [dataclasses.replace(s, t=s.t + 0.6) for s in traj.samples[i:]]
            gapped = traj.replace_samples(traj.samples[:i] + tail)
            result = apply_filters(gapped)
            assert not result.kept and result.drop_reason == "time_jump"

        # a single sample displaced >= 10 cm must be removed, exactly it
        for traj in trajectories[:400]:
            i = int(rng.integers(3, len(traj) - 3))
            direction = rng.normal(size=3)
            direction /= np.linalg.norm(direction)
            offset = (0.10 + 0.3 * rng.random()) * direction
            s = traj.samples[i]
            bad = dataclasses.replace(
                s, x=s.x + offset[0], y=s.y + offset[1], z=s.z + offset[2]
            )
            spiked = traj.replace_samples(traj.samples[:i] + [bad] + traj.samples[i + 1 :])
            assert i in filter_position_jump(spiked).removed_indices


def test_ramp_up_scatter_trend_and_jump_ab():
    """Short ramp scatters more than long ramp; orientation jumps change nothing."""
    with budget(60.0):
        base = LauncherState(wheel_actuation=(38.0, 38.0, 38.0), altitude_deg=19.9)
        fast = run_accuracy_experiment(
            SimSession(seed=5), dataclasses.replace(base, ramp_up_time=0.1), 200
        )
        slow = run_accuracy_experiment(
            SimSession(seed=105), dataclasses.replace(base, ramp_up_time=2.0), 200
        )
        ci = bootstrap_sigma_diff(
            fast.landings, slow.landings, rng=np.random.default_rng(0)
        )
        assert fast.stats.sigma_avg > slow.stats.sigma_avg
        assert ci.lo > 0.0, f"trend not significant: CI ({ci.lo:.4f}, {ci.hi:.4f})"

        jump = run_accuracy_experiment(SimSession(seed=205), base, 20, jump=True)
        static = run_accuracy_experiment(SimSession(seed=305), base, 20)
        ci_ab = bootstrap_sigma_diff(
            jump.landings, static.landings, rng=np.random.default_rng(1)
        )
        assert ci_ab.contains_zero, f"jump A/B spuriously significant: ({ci_ab.lo:.4f}, {ci_ab.hi:.4f})"


def test_protocol_latency_fuzz_and_sustained_launching():
    """Loopback server: fast pings, fuzz immunity, starvation-free launch runs."""

    async def scenario():
        config = ServerConfig(tcp_port=0, clock_rate=50.0, supervision=True)
        service = LauncherService(config)
        await service.start()
        server = await serve_tcp(service, "127.0.0.1", 0)
        port = server.sockets[0].getsockname()[1]
        try:
            await asyncio.to_thread(drive, port)
        finally:
            server.close()
            await server.wait_closed()
            await service.stop()

    def drive(port):
        with ClientSession("127.0.0.1", port) as client:
            client.set_state((38.0, 38.0, 38.0), 0.0, 19.9)
            client.configure(ramp_up_time="continuous")
            rtts = []
            for _ in range(1000):
                t0 = time.perf_counter()
                client.ping()
                rtts.append(time.perf_counter() - t0)
            p99 = float(np.percentile(rtts, 99))
            assert p99 < 0.5, f"ping p99 {p99 * 1000:.1f} ms"

        # garbage frames may kill their own connection, never the server
        rng = random.Random(42)
        for _ in range(40):
            with contextlib.suppress(OSError):
                sock = socket.create_connection(("127.0.0.1", port), timeout=2.0)
                frame = bytes(rng.randrange(256) for _ in range(rng.randrange(1, 200)))
                sock.sendall(frame + b"\n")
                sock.settimeout(0.5)
                with contextlib.suppress(socket.timeout):
                    sock.recv(4096)
                sock.close()
        for _ in range(40):
            with contextlib.suppress(OSError):
                sock = socket.create_connection(("127.0.0.1", port), timeout=2.0)
                doc = {"id": rng.randrange(5), "cmd": "ping"}
                mutated = json.dumps(doc)[: rng.randrange(3, 20)]
                sock.sendall(mutated.encode() + b"\n")
                sock.settimeout(0.5)
                with contextlib.suppress(socket.timeout):
                    sock.recv(4096)
                sock.close()

        # launch cadence at 0.8-5 s virtual spacing, accelerated 50x
        with ClientSession("127.0.0.1", port) as client:
            assert client.ping()["ok"], "server died under fuzzing"
            client.set_state((38.0, 38.0, 38.0), 0.0, 19.9)
            client.configure(ramp_up_time="continuous")
            for _ in range(100):
                time.sleep(rng.uniform(0.8, 5.0) / 50.0)
                client.launch_and_wait(timeout=30.0)  # raises on feed starvation

    with budget(60.0):
        asyncio.run(scenario())


def _numeric_gradients(net, x, y, eps=1e-6):
    # central differences of the mean squared error, parameter by parameter
    def loss():
        d = net.forward(x) - y
        return float(np.mean(d * d))

    out = []
    for k in range(len(net.weights)):
        pair = []
        for arr in (net.weights[k], net.biases[k]):
            g = np.zeros_like(arr)
            it = np.nditer(arr, flags=["multi_index"])
            for _ in it:
                ix = it.multi_index
                kept = arr[ix]
                arr[ix] = kept + eps
                up = loss()
                arr[ix] = kept - eps
                g[ix] = (up - loss()) / (2.0 * eps)
                arr[ix] = kept
            pair.append(g)
        out.append(pair)
    return out


def test_grid_shooting_network_hits_targets():
    """Train on simulated launches, then shoot the whole target grid."""
    with budget(600.0):
        rng = np.random.default_rng(20)
        session = SimSession(seed=21)
        trajectories = []
        for _ in range(550):
            act = float(rng.uniform(35.0, 42.0))
            trajectories.append(
                session.launch(
                    LauncherState(
                        wheel_actuation=(act, act, act),
                        azimuth_deg=float(rng.uniform(-12.0, 12.0)),
                        altitude_deg=float(rng.uniform(10.0, 31.0)),
                        ramp_up_time=2.0,
                    )
                ).measured
            )
        train_set = build_training_set(trajectories)
        assert train_set.n_trajectories >= 400

        # analytic gradients against an independent numerical oracle
        check_rng = np.random.default_rng(3)
        net = Mlp.create([3, 7, 5, 2], check_rng)
        x = check_rng.normal(size=(10, 3))
        y = check_rng.normal(size=(10, 2))
        cache = []
        diff = net.forward(x, cache=cache) - y
        analytic = net.backward(cache, 2.0 * diff / diff.size)
        for (aw, ab), (nw, nb) in zip(analytic, _numeric_gradients(net, x, y)):
            for a, n in ((aw, nw), (ab, nb)):
                denom = np.maximum(np.maximum(np.abs(a), np.abs(n)), 1e-12)
                assert (np.abs(a - n) / denom).max() < 1e-4

        config = desk_config(seed=0)
        first = train(train_set, config)
        second = train(train_set, config)
        for w1, w2 in zip(first.model.weights, second.model.weights):
            assert w1.tobytes() == w2.tobytes(), "training is not bit-reproducible"
        for b1, b2 in zip(first.model.biases, second.model.biases):
            assert b1.tobytes() == b2.tobytes(), "training is not bit-reproducible"

        evaluation = evaluate_grid(first.model, SimSession(QUIET, seed=99))
        assert evaluation.n_missed == 0
        assert evaluation.mean_error <= 0.15, f"grid error {evaluation.mean_error:.3f} m"


def test_dataset_default_mix_and_on_table_fraction(tmp_path):
    with budget(300.0):
        manifest = generate_dataset(tmp_path, seed=0)
        sizes = [(g.label, g.n) for g in manifest.groups]
        assert sizes == [
            ("equal-wheels", 415),
            ("fast-high-spin", 64),
            ("slow", 364),
            ("high-altitude", 1103),
            ("medium-altitude", 1385),
            ("low-altitude", 430),
        ]
        assert manifest.n_total == 3761
        assert 0.80 <= manifest.on_table_fraction <= 0.95
