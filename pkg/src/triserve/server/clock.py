"""Monotonic service clock with an optional acceleration factor.

All scheduling inside the service happens on this clock's timeline.  A rate
above 1 compresses wall time, which keeps long launch schedules testable in
seconds without touching any timing logic.
"""

import asyncio
import time


class Clock:
    def __init__(self, rate: float = 1.0):
        if rate <= 0:
            raise ValueError("clock rate must be positive")
        self.rate = rate
        self._origin = time.monotonic()

    def now(self) -> float:
        """Seconds since service start, on the service timeline."""
        return (time.monotonic() - self._origin) * self.rate

    async def sleep(self, dt: float) -> None:
        if dt > 0:
            await asyncio.sleep(dt / self.rate)

    def from_unix(self, t_unix: float) -> float:
        """Convert a wall-clock target to the service timeline, once."""
        return self.now() + (t_unix - time.time()) * self.rate
