"""Network control service: TCP protocol, WebSocket gateway, supervision."""

from .clock import Clock
from .protocol import ProtocolError, parse_request, serialize
from .backend import SimBackend
from .core import LauncherService, ServerConfig
from .tcp import serve_tcp
from .gateway import build_gateway

__all__ = [
    "Clock",
    "LauncherService",
    "ProtocolError",
    "ServerConfig",
    "SimBackend",
    "build_gateway",
    "parse_request",
    "serialize",
    "serve_tcp",
]
