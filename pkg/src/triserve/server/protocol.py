"""Wire protocol: newline-delimited JSON requests and responses.

Every frame is one JSON object per line.  Requests carry an integer ``id``
and a ``cmd``; responses echo the id and always include the launcher state
snapshot.  Unknown commands and malformed payloads produce error responses,
never crashes.
"""

import json
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

MAX_FRAME_BYTES = 64 * 1024


class ProtocolError(Exception):
    def __init__(self, message: str, request_id: Optional[int] = None):
        super().__init__(message)
        self.request_id = request_id


class _Payload(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PingPayload(_Payload):
    pass


class GetStatePayload(_Payload):
    pass


class SetWheelsPayload(_Payload):
    bottom: float
    top_left: float
    top_right: float


class SetOrientationPayload(_Payload):
    azimuth_deg: float
    altitude_deg: float


class ConfigurePayload(_Payload):
    stroke_gain: Optional[float] = None
    ramp_up_time: Optional[Union[float, Literal["continuous"]]] = None
    pinch_diameter_mm: Optional[float] = None


class LaunchPayload(_Payload):
    pass


class LaunchAtPayload(_Payload):
    t_monotonic_s: Optional[float] = None
    t_unix_s: Optional[float] = None

    def target_given(self) -> bool:
        return (self.t_monotonic_s is None) != (self.t_unix_s is None)


class StirPayload(_Payload):
    pass


class ShutdownPayload(_Payload):
    pass


class SubscribeEventsPayload(_Payload):
    pass


class TakeTrajectoryPayload(_Payload):
    pass


PAYLOADS = {
    "ping": PingPayload,
    "get_state": GetStatePayload,
    "set_wheels": SetWheelsPayload,
    "set_orientation": SetOrientationPayload,
    "configure": ConfigurePayload,
    "launch": LaunchPayload,
    "launch_at": LaunchAtPayload,
    "stir": StirPayload,
    "shutdown": ShutdownPayload,
    "subscribe_events": SubscribeEventsPayload,
    "take_trajectory": TakeTrajectoryPayload,
}


class Request(BaseModel):
    model_config = ConfigDict(extra="allow")

    id: int = Field(ge=0)
    cmd: str
    payload: object = None  # validated command payload, set by parse_request


def parse_request(line: Union[str, bytes]) -> Request:
    """Validate one frame. Raises ProtocolError with the id when recoverable."""
    if isinstance(line, bytes):
        if len(line) > MAX_FRAME_BYTES:
            raise ProtocolError("frame too large")
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError:
            raise ProtocolError("frame is not valid UTF-8")
    elif len(line) > MAX_FRAME_BYTES:
        raise ProtocolError("frame too large")
    try:
        doc = json.loads(line)
    except json.JSONDecodeError as e:
        raise ProtocolError(f"invalid JSON: {e.msg}")
    if not isinstance(doc, dict):
        raise ProtocolError("frame must be a JSON object")
    raw_id = doc.get("id")
    req_id = raw_id if isinstance(raw_id, int) and not isinstance(raw_id, bool) else None
    if req_id is None or req_id < 0:
        raise ProtocolError("missing or invalid id", request_id=None)
    cmd = doc.get("cmd")
    if not isinstance(cmd, str) or cmd not in PAYLOADS:
        raise ProtocolError(f"unknown command: {cmd!r}", request_id=req_id)
    fields = {k: v for k, v in doc.items() if k not in ("id", "cmd")}
    try:
        payload = PAYLOADS[cmd].model_validate(fields)
    except ValidationError as e:
        first = e.errors()[0]
        loc = ".".join(str(p) for p in first["loc"]) or cmd
        raise ProtocolError(f"bad payload: {loc}: {first['msg']}", request_id=req_id)
    if cmd == "launch_at" and not payload.target_given():
        raise ProtocolError(
            "launch_at needs exactly one of t_monotonic_s, t_unix_s", request_id=req_id
        )
    return Request(id=req_id, cmd=cmd, payload=payload)


def response(
    req_id: Optional[int],
    ok: bool,
    state: dict,
    feed: dict,
    t: float,
    event: Optional[dict] = None,
    error: Optional[str] = None,
    **extra,
) -> dict:
    doc = {"id": req_id, "ok": ok, "state": state, "feed": feed, "t": t}
    if event is not None:
        doc["event"] = event
    if error is not None:
        doc["error"] = error
    doc.update(extra)
    return doc


def serialize(doc: dict) -> bytes:
    return (json.dumps(doc, separators=(",", ":")) + "\n").encode("utf-8")
