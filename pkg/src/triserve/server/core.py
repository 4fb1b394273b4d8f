"""Authoritative launcher state machine.

One dispatch task owns all state mutations; launches execute serially in
their own task so slow ramp-ups never stall pings from other connections.
A supervision task watches the feed sensor and stirs the reservoir when the
queue runs low, mirroring how the physical machine keeps itself fed.
"""

import asyncio
from collections import deque
from dataclasses import dataclass
from typing import Optional, Set

from ..lab.filters import filter_position_jump
from ..lab.landing import NoReboundError, estimate_landing
from ..simcore.types import LauncherState, SimConfig
from ..trajectory import TableRegion
from .backend import SimBackend
from .clock import Clock
from .protocol import Request, response

# ramp retries reuse spinning motors, so the retry state skips the ramp wait
_MAX_CYCLE_ATTEMPTS = 3
_FEED_SLICE_S = 0.25


def _trajectory_doc(traj) -> dict:
    """Wire form of a trajectory, same fields as the archive header."""
    return {
        "id": traj.id,
        "launcher_state": traj.control.as_dict() if traj.control else None,
        "distance_m": traj.launcher_distance_to_table,
        "samples": [[s.t, s.x, s.y, s.z] for s in traj.samples],
    }


@dataclass(frozen=True)
class ServerConfig:
    tcp_port: int = 5555
    gateway_port: int = 8080
    sim: Optional[SimConfig] = None
    seed: Optional[int] = None
    max_latency_budget_s: float = 0.5
    clock_rate: float = 1.0
    supervision_hz: float = 10.0
    supervision: bool = True  # stirrer automation on/off
    stir_after_launch: bool = False
    broadcast_interval_s: float = 0.2
    static_dir: Optional[str] = None

    def __post_init__(self):
        if self.tcp_port == self.gateway_port:
            raise ValueError("tcp_port and gateway_port must differ")


@dataclass
class _LaunchJob:
    request_id: int
    target_t: Optional[float]
    reply: "asyncio.Future"


class LauncherService:
    def __init__(self, config: Optional[ServerConfig] = None):
        self.config = config or ServerConfig()
        self.backend = SimBackend(cfg=self.config.sim, seed=self.config.seed)
        self.clock = Clock(rate=self.config.clock_rate)
        self.launch_count = 0
        self.last_record = None
        self._requests: "asyncio.Queue" = asyncio.Queue()
        self._launches: "asyncio.Queue" = asyncio.Queue()
        self._subscribers: Set[asyncio.Queue] = set()
        self._tasks = []
        self._stopping = asyncio.Event()
        self._starved_streak = 0
        # every task advances the feed opportunistically, so release/starve
        # events funnel through one buffer the launcher alone drains
        self._feed_events: deque = deque()

    # ---- lifecycle ----

    async def start(self):
        loop = asyncio.get_running_loop()
        self._tasks = [
            loop.create_task(self._dispatch_loop(), name="dispatch"),
            loop.create_task(self._launcher_loop(), name="launcher"),
            loop.create_task(self._supervision_loop(), name="supervision"),
            loop.create_task(self._broadcast_loop(), name="broadcast"),
        ]
        return self

    async def stop(self):
        self._stopping.set()
        for task in self._tasks:
            task.cancel()
        for task in self._tasks:
            try:
                await task
            except asyncio.CancelledError:
                pass
        self._tasks = []
        while not self._launches.empty():
            job = self._launches.get_nowait()
            if not job.reply.done():
                job.reply.set_result(self._response(job.request_id, ok=False, error="shutdown"))

    @property
    def stopping(self) -> bool:
        return self._stopping.is_set()

    # ---- client entry points ----

    async def submit(self, request: Request) -> dict:
        """Queue one validated request; resolves with the response dict."""
        future = asyncio.get_running_loop().create_future()
        await self._requests.put((request, future))
        return await future

    def subscribe(self) -> asyncio.Queue:
        q = asyncio.Queue(maxsize=64)
        self._subscribers.add(q)
        return q

    def unsubscribe(self, q: asyncio.Queue) -> None:
        self._subscribers.discard(q)

    def snapshot(self) -> dict:
        fs = self.backend.read_sensor()
        return {
            "state": self.backend.state.as_dict(),
            "feed": {
                "queue_length": fs.queue_length,
                "clogged": fs.clogged,
                "sensor_filled": fs.sensor_filled,
            },
            "t": self.clock.now(),
            "launch_count": self.launch_count,
        }

    # ---- internals ----

    def _response(self, req_id, ok, event=None, error=None, **extra) -> dict:
        snap = self.snapshot()
        return response(req_id, ok, snap["state"], snap["feed"], snap["t"], event, error, **extra)

    def _publish(self, doc: dict) -> None:
        for q in list(self._subscribers):
            try:
                q.put_nowait(doc)
            except asyncio.QueueFull:
                self._subscribers.discard(q)  # slow consumer, drop it

    def _publish_event(self, event: dict) -> None:
        self._publish({"type": "event", "event": event, "t": self.clock.now()})

    def _advance_feed(self) -> None:
        self._feed_events.extend(self.backend.sync_feed(self.clock.now()))

    async def _dispatch_loop(self):
        while True:
            request, future = await self._requests.get()
            try:
                result = self._handle(request, future)
                if result is not None and not future.done():
                    future.set_result(result)
            except Exception as e:  # pydantic/value errors become error replies
                if not future.done():
                    future.set_result(self._response(request.id, ok=False, error=str(e)))

    def _handle(self, request: Request, future) -> Optional[dict]:
        cmd = request.cmd
        p = request.payload
        self._advance_feed()
        if cmd in ("ping", "get_state"):
            return self._response(request.id, ok=True)
        if cmd == "set_wheels":
            return self._apply(request.id, wheel_actuation=(p.bottom, p.top_left, p.top_right))
        if cmd == "set_orientation":
            return self._apply(request.id, azimuth_deg=p.azimuth_deg, altitude_deg=p.altitude_deg)
        if cmd == "configure":
            changes = {}
            if p.stroke_gain is not None:
                changes["stroke_gain"] = p.stroke_gain
            if p.ramp_up_time is not None:
                changes["ramp_up_time"] = p.ramp_up_time
            if p.pinch_diameter_mm is not None:
                changes["pinch_diameter_mm"] = p.pinch_diameter_mm
            return self._apply(request.id, **changes)
        if cmd == "stir":
            was_clogged = self.backend.read_sensor().clogged
            cleared = self.backend.stir()
            event = None
            if was_clogged and cleared:
                event = {"kind": "clog_resolved"}
                self._publish_event(event)
            return self._response(request.id, ok=True, event=event)
        if cmd == "launch":
            self._launches.put_nowait(_LaunchJob(request.id, None, future))
            return None
        if cmd == "launch_at":
            target = p.t_monotonic_s
            if target is None:
                target = self.clock.from_unix(p.t_unix_s)
            if target < self.clock.now():
                return self._response(request.id, ok=False, error="launch_at target is in the past")
            self._launches.put_nowait(_LaunchJob(request.id, target, future))
            return None
        if cmd == "shutdown":
            self._stopping.set()
            return self._response(request.id, ok=True)
        if cmd == "subscribe_events":
            # the transport attaches the push channel; the service just acks
            return self._response(request.id, ok=True)
        if cmd == "take_trajectory":
            if self.last_record is None:
                return self._response(request.id, ok=False, error="no launch recorded yet")
            return self._response(
                request.id, ok=True,
                trajectory=_trajectory_doc(self.last_record.measured),
            )
        return self._response(request.id, ok=False, error=f"unknown command: {cmd}")

    def _apply(self, req_id: int, **changes) -> dict:
        try:
            self.backend.apply_state(**changes)
        except ValueError as e:
            return self._response(req_id, ok=False, error=str(e))
        return self._response(req_id, ok=True)

    # ---- launching ----

    async def _launcher_loop(self):
        while True:
            job = await self._launches.get()
            if job.reply.done():
                continue
            try:
                result = await self._run_launch(job)
            except Exception as e:
                result = self._response(job.request_id, ok=False, error=f"launch failed: {e}")
            if not job.reply.done():
                job.reply.set_result(result)

    async def _run_launch(self, job: _LaunchJob) -> dict:
        state = self.backend.state
        estimate = self.backend.launch_estimate(state)
        best_effort = False
        if job.target_t is not None:
            start_at = job.target_t - estimate
            now = self.clock.now()
            if start_at < now:
                best_effort = True
            else:
                await self.clock.sleep(start_at - now)
        released_at = None
        ramp_done = False
        for attempt in range(_MAX_CYCLE_ATTEMPTS):
            # a retry keeps the motors spinning, so only the first attempt ramps
            cycle_state = state if not ramp_done else state.with_values(ramp_up_time="continuous")
            self._advance_feed()
            self._feed_events.clear()  # stale pre-cycle events
            cycle_t0 = self.backend.feed_time
            self.backend.begin_cycle(cycle_state)
            ramp_done = True
            event = await self._await_feed_event()
            if event is None:
                return self._response(job.request_id, ok=False, error="launch interrupted")
            if event.kind == "released":
                released_at = cycle_t0 + event.tick * self.backend.mech.tick_s
                break
            # starved: give the stirrer a chance, then retry the stroke
            self._publish_event({"kind": "feed_starved"})
            if not self.config.supervision:
                return self._response(
                    job.request_id, ok=False, error="feed_starved",
                    event={"kind": "feed_starved"},
                )
            self._stir_until_clear()
            await self.clock.sleep(0.5)  # reservoir refill time
        if released_at is None:
            return self._response(
                job.request_id, ok=False, error="feed_starved",
                event={"kind": "feed_starved"},
            )
        record = self.backend.fly(state)
        self.launch_count += 1
        self.last_record = record
        if self.config.stir_after_launch:
            self.backend.stir()
        event = {"kind": "launched", "t": released_at, "landing": self._landing(record)}
        self._publish_event(event)
        reply = self._response(job.request_id, ok=True, event=event)
        if best_effort:
            reply["best_effort"] = True
        return reply

    async def _await_feed_event(self):
        while True:
            self._advance_feed()
            while self._feed_events:
                ev = self._feed_events.popleft()
                if ev.kind in ("released", "starved"):
                    return ev
            if not self.backend.cycle_active():
                return None
            await self.clock.sleep(_FEED_SLICE_S)

    def _stir_until_clear(self) -> None:
        for _ in range(3):
            was_clogged = self.backend.read_sensor().clogged
            cleared = self.backend.stir()
            if cleared:
                if was_clogged:
                    self._publish_event({"kind": "clog_resolved"})
                return

    def _landing(self, record) -> Optional[dict]:
        try:
            cleaned = filter_position_jump(record.measured).trajectory
            est = estimate_landing(cleaned, region=TableRegion())
        except (NoReboundError, ValueError):
            return None
        if not est.valid:
            return None
        return {"x": est.x, "y": est.y, "t": est.t_land}

    # ---- background upkeep ----

    async def _supervision_loop(self):
        period = 1.0 / self.config.supervision_hz
        while True:
            await self.clock.sleep(period)
            self._advance_feed()
            if not self.config.supervision:
                continue
            fs = self.backend.read_sensor()
            if fs.sensor_filled:
                self._starved_streak = 0
                continue
            self._starved_streak += 1
            if self._starved_streak >= 2:
                self._stir_until_clear()
                self._starved_streak = 0

    async def _broadcast_loop(self):
        while True:
            await asyncio.sleep(self.config.broadcast_interval_s)
            snap = self.snapshot()
            snap["type"] = "state"
            self._publish(snap)
