"""Command line entry points: serve, sweep, dataset, train, eval, ping.

Exit codes: 0 success, 2 usage problems, 3 runtime failures.  The endpoint
for client commands defaults to the TRISERVE_ENDPOINT environment variable
(`host:port`), falling back to 127.0.0.1:5555.
"""

import asyncio
import dataclasses
import json
import signal
import sys
from pathlib import Path

import click
import uvicorn

from .client import ClientError, ClientSession
from .dataset import DEFAULT_MIX, GroupSpec, generate_dataset, scale_mix
from .lab import sweep_parameter, write_stats_csv
from .server import LauncherService, ServerConfig, build_gateway, serve_tcp
from .simcore import LauncherState, SimConfig, SimSession
from .targetnet import (
    TrainConfig,
    build_training_set,
    desk_config,
    evaluate_grid,
    full_config,
    load_model,
    save_model,
    target_grid,
    train,
    write_grid_report,
    write_history_csv,
)
from .lab.io import read_trajectories

DEFAULT_ENDPOINT = "127.0.0.1:5555"

_SWEEP_FIELDS = {
    "ramp_up": "ramp_up_time",
    "stroke_gain": "stroke_gain",
    "pinch": "pinch_diameter_mm",
}


def _fail(message) -> "None":
    click.echo(f"error: {message}", err=True)
    sys.exit(3)


def _parse_endpoint(value: str):
    host, _, port = value.rpartition(":")
    if not host or not port.isdigit():
        raise click.UsageError(f"endpoint must be host:port, got {value!r}")
    return host, int(port)


def load_config(path):
    """Read a TOML or JSON config file into (SimConfig, server kwargs).

    Recognized sections: [sim] with SimConfig fields, [server] with
    ServerConfig fields (except `sim`).  Unknown keys are rejected.
    """
    raw = Path(path).read_bytes()
    if str(path).endswith(".json"):
        doc = json.loads(raw)
    else:
        try:
            import tomllib  # py311+
        except ModuleNotFoundError:
            import tomli as tomllib
        doc = tomllib.loads(raw.decode("utf-8"))
    if not isinstance(doc, dict):
        raise click.UsageError("config root must be a table/object")
    unknown = set(doc) - {"sim", "server"}
    if unknown:
        raise click.UsageError(f"unknown config sections: {sorted(unknown)}")

    sim_fields = {f.name for f in dataclasses.fields(SimConfig)}
    sim_doc = doc.get("sim", {})
    bad = set(sim_doc) - sim_fields
    if bad:
        raise click.UsageError(f"unknown [sim] keys: {sorted(bad)}")

    server_fields = {f.name for f in dataclasses.fields(ServerConfig)} - {"sim"}
    server_doc = doc.get("server", {})
    bad = set(server_doc) - server_fields
    if bad:
        raise click.UsageError(f"unknown [server] keys: {sorted(bad)}")

    try:
        sim = SimConfig(**{k: tuple(v) if isinstance(v, list) else v for k, v in sim_doc.items()})
    except (TypeError, ValueError) as e:
        raise click.UsageError(f"bad [sim] config: {e}")
    return sim, dict(server_doc)


@click.group()
def cli():
    """Control and experiment tooling for the simulated ball launcher."""


# ---- serve ----


async def _run_server(config: ServerConfig, host: str):
    service = LauncherService(config)
    await service.start()
    try:
        tcp = await serve_tcp(service, host=host, port=config.tcp_port)
    except OSError as e:
        await service.stop()
        raise e
    app = build_gateway(service)
    uv = uvicorn.Server(uvicorn.Config(
        app, host=host, port=config.gateway_port, log_level="warning"))
    uv_task = asyncio.create_task(uv.serve())
    while not uv.started:
        if uv_task.done():
            tcp.close()
            await service.stop()
            raise OSError(f"gateway failed to bind {host}:{config.gateway_port}")
        await asyncio.sleep(0.01)

    tcp_port = tcp.sockets[0].getsockname()[1]
    http_port = uv.servers[0].sockets[0].getsockname()[1]
    click.echo(f"listening tcp={host}:{tcp_port} http={host}:{http_port}")

    stop = asyncio.Event()
    loop = asyncio.get_running_loop()
    for sig in (signal.SIGINT, signal.SIGTERM):
        loop.add_signal_handler(sig, stop.set)
    # uvicorn races us for the signal slot; if it wins, its server task
    # simply exits, so watch that too rather than the flag alone
    while not stop.is_set() and not service.stopping and not uv_task.done():
        await asyncio.sleep(0.1)

    uv.should_exit = True
    await uv_task
    tcp.close()
    await tcp.wait_closed()
    await service.stop()


@cli.command()
@click.option("--port", default=5555, show_default=True, help="TCP control port.")
@click.option("--gateway-port", default=8080, show_default=True, help="HTTP/WebSocket port.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--sim-seed", type=int, default=None, help="Simulation RNG seed.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="TOML or JSON config file.")
@click.option("--static-dir", type=click.Path(file_okay=False), default=None,
              help="Operator console assets served at /.")
def serve(port, gateway_port, host, sim_seed, config_path, static_dir):
    """Run the launcher control server until interrupted."""
    sim, server_kwargs = (None, {}) if config_path is None else load_config(config_path)
    server_kwargs.setdefault("tcp_port", port)
    server_kwargs.setdefault("gateway_port", gateway_port)
    if sim_seed is not None:
        server_kwargs["seed"] = sim_seed
    if static_dir is not None:
        server_kwargs["static_dir"] = static_dir
    try:
        config = ServerConfig(sim=sim, **server_kwargs)
        asyncio.run(_run_server(config, host))
    except KeyboardInterrupt:
        pass  # interactive interrupt is a clean stop
    except (OSError, ValueError) as e:
        _fail(e)


# ---- sweep ----


@cli.command()
@click.option("--param", type=click.Choice(sorted(_SWEEP_FIELDS)), required=True)
@click.option("--values", required=True, help="Comma-separated values, e.g. 0.1,0.5,2.")
@click.option("--launches", default=200, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--wheels", default="38,38,38", show_default=True,
              help="Fixed wheel actuation percentages (bottom,top_left,top_right).")
@click.option("--azimuth", default=0.0, show_default=True)
@click.option("--altitude", default=19.9, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Stats CSV path.")
def sweep(param, values, launches, seed, wheels, azimuth, altitude, out):
    """Launch repeatedly at each value of one launcher parameter."""
    try:
        parsed = [float(v) for v in values.split(",") if v.strip() != ""]
    except ValueError:
        raise click.UsageError(f"--values must be numbers, got {values!r}")
    if not parsed:
        raise click.UsageError("--values is empty")
    if launches < 1:
        raise click.UsageError("--launches must be >= 1")
    try:
        triple = tuple(float(w) for w in wheels.split(","))
        state = LauncherState(wheel_actuation=triple, azimuth_deg=azimuth,
                              altitude_deg=altitude)
    except ValueError as e:
        raise click.UsageError(f"bad launch state: {e}")

    field = _SWEEP_FIELDS[param]
    rows = []
    try:
        for i, value in enumerate(parsed):
            # one launcher instance per sweep point keeps points independent
            session = SimSession(seed=seed + i)
            [(_, result)] = sweep_parameter(session, state, field, [value], launches)
            stats = result.stats
            rows.append((f"{param}={value:g}", stats))
            click.echo(
                f"{param}={value:g}: n={stats.n} dropped={result.n_dropped} "
                f"sigma_x={stats.sigma_x:.4f} sigma_y={stats.sigma_y:.4f} "
                f"sigma_norm={stats.sigma_norm:.4f}"
            )
        write_stats_csv(out, rows)
    except (ValueError, OSError) as e:
        _fail(e)
    click.echo(f"wrote {out}")


# ---- dataset ----


def _mix_from_file(path) -> tuple:
    doc = json.loads(Path(path).read_text())
    if not isinstance(doc, list) or not doc:
        raise click.UsageError("mix file must be a non-empty JSON list of groups")
    groups = []
    for entry in doc:
        try:
            groups.append(GroupSpec(
                label=entry["label"],
                n=int(entry["n"]),
                actuation=tuple(entry["actuation"]),
                spread=tuple(entry["spread"]),
                altitude=tuple(entry["altitude"]),
                azimuth=tuple(entry.get("azimuth", (-12.0, 12.0))),
                spin_style=entry.get("spin_style", "random"),
            ))
        except (KeyError, TypeError, ValueError) as e:
            raise click.UsageError(f"bad mix entry {entry!r}: {e}")
    return tuple(groups)


@cli.command()
@click.option("--n", default=3761, show_default=True, help="Total trajectories.")
@click.option("--seed", default=0, show_default=True)
@click.option("--mix", "mix_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON file overriding the built-in control-regime mix.")
@click.option("--out", type=click.Path(file_okay=False), required=True)
def dataset(n, seed, mix_path, out):
    """Generate a launch dataset with the standard control-regime mix."""
    mix = DEFAULT_MIX if mix_path is None else _mix_from_file(mix_path)
    try:
        scale_mix(mix, n)  # validate n before any slow work
        manifest = generate_dataset(out, n=n, seed=seed, mix=mix)
    except (ValueError, OSError) as e:
        _fail(e)
    for g in manifest.groups:
        click.echo(f"{g.label}: {g.n} launches, {g.n_on_table} on table -> {g.path}")
    click.echo(
        f"total {manifest.n_total} launches, {manifest.n_on_table} on table "
        f"({100.0 * manifest.on_table_fraction:.1f}%)"
    )


# ---- train ----


def _read_archive_dir(data_dir) -> list:
    paths = sorted(Path(data_dir).glob("*.jsonl"))
    if not paths:
        raise click.UsageError(f"no .jsonl trajectory archives in {data_dir}")
    trajectories = []
    for p in paths:
        trajectories.extend(read_trajectories(p))
    return trajectories


@cli.command("train")
@click.option("--data", "data_dir", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--model", "model_path", type=click.Path(dir_okay=False), required=True)
@click.option("--history", type=click.Path(dir_okay=False), default=None,
              help="Write the epoch,loss,lr training report here.")
@click.option("--preset", type=click.Choice(["desk", "full"]), default="desk",
              show_default=True)
@click.option("--epochs", type=int, default=None)
@click.option("--batch-size", type=int, default=None)
@click.option("--hidden", default=None, help="Comma-separated layer sizes, e.g. 64,32,16.")
@click.option("--seed", type=int, default=None)
@click.option("--all-controls", is_flag=True,
              help="Train on unequal wheel settings too (mean actuation target).")
@click.option("--window", default=5, show_default=True)
def train_cmd(data_dir, model_path, history, preset, epochs, batch_size, hidden, seed,
              all_controls, window):
    """Fit the target-shooting network on a trajectory archive directory."""
    config = desk_config() if preset == "desk" else full_config()
    overrides = {}
    if epochs is not None:
        overrides["epochs"] = epochs
    if batch_size is not None:
        overrides["batch_size"] = batch_size
    if seed is not None:
        overrides["seed"] = seed
    if hidden is not None:
        try:
            overrides["hidden_sizes"] = tuple(int(h) for h in hidden.split(","))
        except ValueError:
            raise click.UsageError(f"--hidden must be comma-separated ints, got {hidden!r}")
    if overrides:
        config = dataclasses.replace(config, **overrides)

    try:
        trajectories = _read_archive_dir(data_dir)
        train_set = build_training_set(
            trajectories, equal_wheels_only=not all_controls, window=window)
        click.echo(
            f"training on {len(train_set)} samples from "
            f"{train_set.n_trajectories} trajectories"
        )
        result = train(train_set, config)
        save_model(model_path, result.model)
        if history is not None:
            write_history_csv(history, result.history)
    except (ValueError, OSError, RuntimeError) as e:
        _fail(e)
    click.echo(f"final loss {result.final_loss:.6f} -> {model_path}")


# ---- eval ----


@cli.command("eval")
@click.option("--model", "model_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--grid", default=20, show_default=True,
              help="20 for the full target grid, 1 for the single center target.")
@click.option("--sim-seed", default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Per-target report CSV.")
@click.option("--window", default=5, show_default=True)
def eval_cmd(model_path, grid, sim_seed, out, window):
    """Shoot at evaluation targets with a trained model and report the error."""
    if grid == 20:
        targets = target_grid()
    elif grid == 1:
        import numpy as np

        from .targetnet.evalgrid import GRID_X_RANGE

        targets = np.array([[(GRID_X_RANGE[0] + GRID_X_RANGE[1]) / 2.0, 0.0]])
    else:
        raise click.UsageError("--grid must be 20 (full grid) or 1 (center target)")

    try:
        model = load_model(model_path)
        session = SimSession(seed=sim_seed)
        evaluation = evaluate_grid(model, session, grid=targets, window=window)
        if out is not None:
            write_grid_report(out, evaluation)
    except (ValueError, OSError) as e:
        _fail(e)
    for o in evaluation.outcomes:
        where = "missed" if o.landing is None else f"error {o.error:.3f} m"
        click.echo(f"target ({o.target[0]:.2f}, {o.target[1]:+.2f}): {where}")
    click.echo(
        f"mean error {evaluation.mean_error:.4f} m over {len(evaluation.outcomes)} targets "
        f"({evaluation.n_missed} missed)"
    )


# ---- ping ----


@cli.command()
@click.option("--endpoint", envvar="TRISERVE_ENDPOINT", default=DEFAULT_ENDPOINT,
              show_default=True, help="host:port (env TRISERVE_ENDPOINT).")
def ping(endpoint):
    """Check that a control server is answering."""
    host, port = _parse_endpoint(endpoint)
    import time

    try:
        with ClientSession(host=host, port=port, timeout=2.0) as c:
            t0 = time.perf_counter()
            resp = c.ping()
            rtt_ms = (time.perf_counter() - t0) * 1e3
    except (ClientError, OSError) as e:
        _fail(f"no server at {endpoint}: {e}")
    state = resp["state"]
    click.echo(
        f"ok in {rtt_ms:.1f} ms: wheels {state['wheel_actuation']}, "
        f"azimuth {state['azimuth_deg']}, altitude {state['altitude_deg']}, "
        f"queue {resp['feed']['queue_length']}"
    )


def main():
    cli()


if __name__ == "__main__":
    main()
