"""Synchronous client for the launcher control protocol.

One session owns one TCP connection and issues strictly increasing request
ids.  Requests block until their response arrives; launching is not
idempotent, so nothing is ever retried automatically.  After
subscribe_events() the server pushes event frames on the same connection;
they are buffered during request/reply exchanges and read with next_event().
"""

import json
import socket
from collections import deque
from typing import NamedTuple, Optional

from .simcore.feed import feed_seconds
from .simcore.types import LauncherState
from .trajectory import BallSample, Trajectory

DEFAULT_TIMEOUT_S = 0.5

_SESSION_DEFAULT = object()  # sentinel: use the session timeout


class ClientError(Exception):
    pass


class RequestRejected(ClientError):
    """Server answered ok=false; the full response is attached."""

    def __init__(self, response: dict):
        super().__init__(response.get("error", "request rejected"))
        self.response = response


class FeedStarvedError(RequestRejected):
    pass


def _rejection(response: dict) -> RequestRejected:
    if response.get("error") == "feed_starved":
        return FeedStarvedError(response)
    return RequestRejected(response)


class ClientSession:
    def __init__(self, host: str = "127.0.0.1", port: int = 5555,
                 timeout: float = DEFAULT_TIMEOUT_S):
        self.timeout = timeout
        self.next_id = 1
        self._sock = socket.create_connection((host, port), timeout=timeout)
        self._file = self._sock.makefile("rb")
        self._events: deque = deque()

    # ---- plumbing ----

    def request(self, cmd: str, timeout=_SESSION_DEFAULT, **fields) -> dict:
        """Send one command and wait for its response; raises on rejection.

        ``timeout=None`` blocks until the response arrives, for commands that
        legitimately take long (scheduled launches).
        """
        req_id = self.next_id
        self.next_id += 1
        frame = {"id": req_id, "cmd": cmd, **fields}
        self._sock.settimeout(self.timeout if timeout is _SESSION_DEFAULT else timeout)
        try:
            self._sock.sendall((json.dumps(frame) + "\n").encode("utf-8"))
            response = self._read_frame(cmd)
        except socket.timeout:
            raise ClientError(f"no response to {cmd} within the timeout")
        except OSError as e:
            raise ClientError(f"connection lost: {e}")
        if response.get("id") != req_id:
            raise ClientError(f"response id {response.get('id')} != request id {req_id}")
        if not response.get("ok"):
            raise _rejection(response)
        return response

    def _read_frame(self, cmd: str) -> dict:
        # pushed event frames carry no id and may interleave with the response
        while True:
            line = self._file.readline()
            if not line:
                raise ClientError("connection closed by server")
            doc = json.loads(line)
            if "id" not in doc:
                self._events.append(doc)
                continue
            return doc

    def close(self) -> None:
        try:
            self._file.close()
            self._sock.close()
        except OSError:
            pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    # ---- commands ----

    def ping(self) -> dict:
        return self.request("ping")

    def get_state(self) -> dict:
        return self.request("get_state")["state"]

    def set_wheels(self, bottom: float, top_left: float, top_right: float) -> dict:
        return self.request(
            "set_wheels", bottom=bottom, top_left=top_left, top_right=top_right
        )["state"]

    def set_orientation(self, azimuth_deg: float, altitude_deg: float) -> dict:
        return self.request(
            "set_orientation", azimuth_deg=azimuth_deg, altitude_deg=altitude_deg
        )["state"]

    def configure(self, **settings) -> dict:
        return self.request("configure", **settings)["state"]

    def set_state(self, wheels, azimuth_deg: float, altitude_deg: float) -> dict:
        """Wheels triple plus orientation in two acknowledged steps."""
        self.set_wheels(*wheels)
        return self.set_orientation(azimuth_deg, altitude_deg)

    def stir(self) -> dict:
        return self.request("stir")

    def shutdown(self) -> dict:
        return self.request("shutdown")

    def subscribe_events(self) -> dict:
        """Opt in to pushed event frames on this connection."""
        return self.request("subscribe_events")

    def next_event(self, timeout=_SESSION_DEFAULT) -> dict:
        """Next pushed event frame: {"type": "event", "event": ..., "t": ...}."""
        if self._events:
            return self._events.popleft()
        self._sock.settimeout(self.timeout if timeout is _SESSION_DEFAULT else timeout)
        try:
            line = self._file.readline()
        except socket.timeout:
            raise ClientError("no event within the timeout")
        except OSError as e:
            raise ClientError(f"connection lost: {e}")
        if not line:
            raise ClientError("connection closed by server")
        doc = json.loads(line)
        if "id" in doc:
            raise ClientError("response frame arrived with no request pending")
        return doc

    def take_trajectory(self) -> Trajectory:
        """Observed trajectory of the most recent completed launch."""
        doc = self.request("take_trajectory")["trajectory"]
        control = doc.get("launcher_state")
        return Trajectory(
            id=str(doc["id"]),
            samples=[BallSample(t=s[0], x=s[1], y=s[2], z=s[3]) for s in doc["samples"]],
            control=LauncherState.from_dict(control) if control else None,
            launcher_distance_to_table=float(doc.get("distance_m", 0.8)),
        )

    def launch_timeout(self, state: Optional[dict] = None, margin: float = 2.0) -> float:
        """Worst-case seconds until the launch response, from the state."""
        state = state or self.get_state()
        ramp = state["ramp_up_time"]
        ramp_s = 0.0 if ramp == "continuous" else float(ramp)
        return ramp_s + feed_seconds(state["stroke_gain"]) + margin

    def launch_and_wait(self, timeout: Optional[float] = None) -> dict:
        """Fire and block until the release event (or a typed feed error)."""
        if timeout is None:
            timeout = self.launch_timeout()
        response = self.request("launch", timeout=timeout)
        return response["event"]

    def launch_at(self, t_monotonic_s: Optional[float] = None,
                  t_unix_s: Optional[float] = None,
                  timeout=None) -> dict:
        """Schedule a launch; blocks until release, so bound it yourself."""
        fields = {}
        if t_monotonic_s is not None:
            fields["t_monotonic_s"] = t_monotonic_s
        if t_unix_s is not None:
            fields["t_unix_s"] = t_unix_s
        return self.request("launch_at", timeout=timeout, **fields)


class _RemoteRecord(NamedTuple):
    measured: Trajectory


class RemoteSession:
    """The experiment-facing launch interface, served over the wire.

    Drop-in for the simulated session in accuracy experiments: launch()
    fires the remote machine, blocks until release and returns a record
    holding the observed trajectory.
    """

    def __init__(self, endpoint: str = "127.0.0.1:5555",
                 timeout: float = DEFAULT_TIMEOUT_S):
        host, _, port = endpoint.rpartition(":")
        self._client = ClientSession(host or "127.0.0.1", int(port), timeout=timeout)

    def set_state(self, state: LauncherState) -> None:
        self._apply(state)

    def _apply(self, state: LauncherState) -> None:
        self._client.set_wheels(*state.wheel_actuation)
        self._client.set_orientation(state.azimuth_deg, state.altitude_deg)
        self._client.configure(
            stroke_gain=state.stroke_gain,
            ramp_up_time=state.ramp_up_time,
            pinch_diameter_mm=state.pinch_diameter_mm,
        )

    def launch(self, state: Optional[LauncherState] = None,
               jump_first: bool = False) -> _RemoteRecord:
        if state is not None:
            self._apply(state)
        if jump_first:
            # wear-check excursion: swing to the orientation extreme and back
            target = state.as_dict() if state is not None else self._client.get_state()
            self._client.set_orientation(-15.8, 6.4)
            self._client.set_orientation(target["azimuth_deg"], target["altitude_deg"])
        self._client.launch_and_wait()
        return _RemoteRecord(measured=self._client.take_trajectory())

    def close(self) -> None:
        self._client.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
