"""Raw capture import: rigid pose correction and timestamp normalization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from ..trajectory import BallSample

_IDENTITY = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))


@dataclass(frozen=True)
class Pose:
    """Rigid transform from the capture frame into the table frame."""

    rotation: tuple = _IDENTITY
    translation: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def matrix(self) -> np.ndarray:
        r = np.asarray(self.rotation, dtype=float)
        if r.shape != (3, 3):
            raise ValueError("rotation must be 3x3")
        return r

    @property
    def is_identity(self) -> bool:
        return (
            np.array_equal(self.matrix(), np.eye(3))
            and tuple(self.translation) == (0.0, 0.0, 0.0)
        )


RawSample = Union[BallSample, Sequence[float]]


def transform_to_table_frame(
    samples: Iterable[RawSample],
    pose: Pose = Pose(),
    timestamps: str = "s",
) -> list[BallSample]:
    """Map raw (t, x, y, z) records into the table frame.

    timestamps="ns" converts integer nanosecond clock readings to seconds
    relative to the first sample (rebasing before the scale keeps the sample
    spacing exact at float64); "s" leaves them alone, making the identity
    pose a no-op.
    """
    if timestamps not in ("s", "ns"):
        raise ValueError(f"timestamps must be 's' or 'ns', got {timestamps!r}")
    rot = pose.matrix()
    trans = np.asarray(pose.translation, dtype=float)
    identity = pose.is_identity
    t_origin = None
    out = []
    for raw in samples:
        if isinstance(raw, BallSample):
            t, p = raw.t, np.array(raw.position)
        else:
            t, p = raw[0], np.asarray(raw[1:4], dtype=float)
        if timestamps == "ns":
            if t_origin is None:
                t_origin = t
            t = (t - t_origin) * 1e-9
        if not identity:
            p = rot @ p + trans
        out.append(BallSample(t=float(t), x=float(p[0]), y=float(p[1]), z=float(p[2])))
    return out
