"""Software twin of a three-wheel table tennis ball launcher.

Subpackages:
    simcore   - physical model: motor curves, launch kinematics, ball flight,
                camera observation, ball feed mechanics
    lab       - trajectory preprocessing, landing estimation, accuracy stats
    targetnet - learned mapping from desired landing point to control values
    server    - TCP control protocol and WebSocket/HTTP gateway
"""

__version__ = "0.1.0"
