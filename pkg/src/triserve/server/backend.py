"""Simulated hardware behind the service's narrow backend interface.

The service only ever calls what a real control computer could offer:
apply a state, advance the feed by elapsed time, read the feed sensor,
stir the reservoir, and fire the launch unit.  Swapping in real hardware
means reimplementing this class, nothing above it.
"""

from typing import Optional

from ..simcore.feed import FeedMechanism, feed_seconds, launch_time_seconds
from ..simcore.session import LaunchRecord, SimSession
from ..simcore.types import FeedState, LauncherState, SimConfig


class SimBackend:
    def __init__(self, cfg: Optional[SimConfig] = None, seed: Optional[int] = None):
        self.session = SimSession(cfg=cfg, seed=seed)
        self.mech = FeedMechanism(self.session.cfg, rng=self.session.rng)
        self.state = LauncherState()
        self._feed_clock = 0.0  # backend time up to which the feed has run

    def apply_state(self, **changes) -> LauncherState:
        """Validate and adopt new control values; raises ValueError untouched."""
        self.state = self.state.with_values(**changes)
        return self.state

    def sync_feed(self, now: float) -> list:
        """Advance the feed mechanism to time ``now``; returns feed events."""
        events = []
        ticks = int((now - self._feed_clock) / self.mech.tick_s)
        if ticks > 0:
            self._feed_clock += ticks * self.mech.tick_s
            for _ in range(ticks):
                ev = self.mech.tick()
                if ev is not None:
                    events.append(ev)
        return events

    @property
    def feed_time(self) -> float:
        return self._feed_clock

    def read_sensor(self) -> FeedState:
        return self.mech.feed_state()

    def stir(self) -> bool:
        return self.mech.stir()

    def begin_cycle(self, state: LauncherState) -> None:
        self.mech.begin_cycle(state)

    def cycle_active(self) -> bool:
        return self.mech.active

    def launch_estimate(self, state: Optional[LauncherState] = None) -> float:
        """Seconds from actuation start to release for the given state."""
        state = state or self.state
        if state.continuous:
            return feed_seconds(state.stroke_gain, self.mech.tick_s)
        return launch_time_seconds(state, self.mech.tick_s)

    def fly(self, state: LauncherState) -> LaunchRecord:
        """Ball physics and camera measurement for one release."""
        return self.session.launch(state)
