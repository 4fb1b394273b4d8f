"""Ball feeding system: crank stroke, supply queue, clogging and stirring.

The feed advances in fixed control ticks. Each tick moves the crank servo by
stroke_gain * K_DEG degrees; the ball drops once the full stroke is reached
and then transits the supply channel to the wheels for a fixed number of
ticks. Timing constants are calibrated so that launch time (actuation start
to release, ramp-up excluded) is 4.21 s at stroke gain 0.1 and 0.62 s at
gain 30.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .types import FeedState, LauncherState, SimConfig

TICK_S = 0.01
FULL_STROKE_DEG = 36.1
K_DEG = 1.0              # degrees per tick at stroke_gain 1
TRANSIT_TICKS = 60       # crank drop point to wheel contact
REFILL_TICKS = 20        # one ball from reservoir per this many ticks
QUEUE_CAPACITY = 5
SENSOR_MIN_BALLS = 2     # sensor reports "filled" at or above this


def stroke_ticks(stroke_gain: float) -> int:
    if stroke_gain <= 0:
        raise ValueError("stroke_gain must be > 0")
    return max(1, math.ceil(FULL_STROKE_DEG / (stroke_gain * K_DEG) - 1e-9))


def feed_seconds(stroke_gain: float, tick_s: float = TICK_S) -> float:
    """Stroke plus transit time, i.e. launch time in continuous mode."""
    return (stroke_ticks(stroke_gain) + TRANSIT_TICKS) * tick_s


def launch_time_seconds(state: LauncherState, tick_s: float = TICK_S) -> float:
    """Actuation start to ball release, ramp-up included."""
    return state.ramp_seconds + feed_seconds(state.stroke_gain, tick_s)


@dataclass(frozen=True)
class FeedEvent:
    kind: Literal["released", "starved"]
    tick: int                 # ticks since cycle start
    t_engage: Optional[float] # s since motor start; None = settled (continuous)


class FeedMechanism:
    """Single-owner state machine for the feed; advanced one tick at a time."""

    def __init__(self, cfg: SimConfig, rng: Optional[np.random.Generator] = None,
                 tick_s: float = TICK_S):
        self.cfg = cfg
        self.rng = rng if rng is not None else np.random.default_rng(cfg.rng_seed)
        self.tick_s = tick_s
        self.queue_length = QUEUE_CAPACITY
        self.clogged = False
        self.stroke_angle = 0.0
        self._refill_countdown = REFILL_TICKS
        self._stir_attempts = 0
        self._phase: Literal["idle", "ramp", "stroke", "transit"] = "idle"
        self._cycle_tick = 0
        self._phase_ticks_left = 0
        self._cycle_state: Optional[LauncherState] = None

    @property
    def sensor_filled(self) -> bool:
        return self.queue_length >= SENSOR_MIN_BALLS

    @property
    def active(self) -> bool:
        return self._phase != "idle"

    def feed_state(self) -> FeedState:
        return FeedState(
            queue_length=self.queue_length,
            clogged=self.clogged,
            stroke_angle=self.stroke_angle,
            sensor_filled=self.sensor_filled and self.queue_length >= 1,
        )

    def begin_cycle(self, state: LauncherState) -> None:
        """Start a launch: ramp wait (unless continuous), then stroke, then transit."""
        if self.active:
            raise RuntimeError("feed cycle already in progress")
        self._cycle_state = state
        self._cycle_tick = 0
        self.stroke_angle = 0.0
        ramp_ticks = 0 if state.continuous else round(state.ramp_seconds / self.tick_s)
        if ramp_ticks > 0:
            self._phase = "ramp"
            self._phase_ticks_left = ramp_ticks
        else:
            self._phase = "stroke"

    def stir(self) -> bool:
        """Agitate the reservoir; clears a clog within at most 3 attempts."""
        if not self.clogged:
            return True
        self._stir_attempts += 1
        if self._stir_attempts >= 3 or self.rng.random() < 0.6:
            self.clogged = False
            self._stir_attempts = 0
            return True
        return False

    def tick(self) -> Optional[FeedEvent]:
        """Advance one control tick; may release a ball or report starvation."""
        if not self.clogged and self.queue_length < QUEUE_CAPACITY:
            self._refill_countdown -= 1
            if self._refill_countdown <= 0:
                self.queue_length += 1
                self._refill_countdown = REFILL_TICKS
        else:
            self._refill_countdown = REFILL_TICKS

        if self._phase == "idle":
            return None
        self._cycle_tick += 1

        if self._phase == "ramp":
            self._phase_ticks_left -= 1
            if self._phase_ticks_left <= 0:
                self._phase = "stroke"
            return None

        if self._phase == "stroke":
            state = self._cycle_state
            self.stroke_angle += state.stroke_gain * K_DEG
            if self.stroke_angle < FULL_STROKE_DEG - 1e-9:
                return None
            # crank at full stroke: the ball drops now, or nothing does
            self.stroke_angle = 0.0
            if self.queue_length == 0:
                self._phase = "idle"
                self._cycle_state = None
                return FeedEvent("starved", self._cycle_tick, None)
            self.queue_length -= 1
            if self.rng.random() < self.cfg.clog_probability:
                self.clogged = True
            self._phase = "transit"
            self._phase_ticks_left = TRANSIT_TICKS
            return None

        # transit
        self._phase_ticks_left -= 1
        if self._phase_ticks_left > 0:
            return None
        tick = self._cycle_tick
        state = self._cycle_state
        self._phase = "idle"
        self._cycle_state = None
        t_engage = None if state.continuous else tick * self.tick_s
        return FeedEvent("released", tick, t_engage)


def step_feed(
    mech: FeedMechanism, state: LauncherState, dt: float
) -> tuple[FeedState, list[FeedEvent]]:
    """Advance the mechanism by dt seconds (whole ticks); functional facade."""
    events = []
    for _ in range(max(0, round(dt / mech.tick_s))):
        ev = mech.tick()
        if ev is not None:
            events.append(ev)
    return mech.feed_state(), events
