from .curves import MotorCurve, default_curves, interpolate_motor_speed, load_motor_curves
from .types import FeedState, LaunchOutcome, LauncherState, SimConfig
from .launch import calibrate, compute_launch, wheel_speed_at
from .flight import FlightResult, simulate_flight, simulate_flight_batch
from .observe import Camera, observe
from .feed import FeedMechanism, FeedEvent
from .session import SimSession

__all__ = [
    "MotorCurve",
    "default_curves",
    "interpolate_motor_speed",
    "load_motor_curves",
    "FeedState",
    "LaunchOutcome",
    "LauncherState",
    "SimConfig",
    "calibrate",
    "compute_launch",
    "wheel_speed_at",
    "FlightResult",
    "simulate_flight",
    "simulate_flight_batch",
    "Camera",
    "observe",
    "FeedMechanism",
    "FeedEvent",
    "SimSession",
]
