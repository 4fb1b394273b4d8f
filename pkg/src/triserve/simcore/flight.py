"""Ball flight integration: gravity, quadratic drag, Magnus lift.

Fixed-step classic Runge-Kutta at dt = 1 ms. The ball is tracked by center
position; table contact happens when the center crosses z = ball_radius while
descending over the table rectangle. Exactly one rebound is simulated
(vertical restitution, horizontal slow-down), then integration continues for
post_bounce_time and stops. Balls missing the table fall to the floor
(z = -table height) and stop there without bouncing.

simulate_flight integrates a single launch; simulate_flight_batch steps many
launches on a shared time grid with numpy (identical dynamics, used by the
bulk experiment and dataset paths).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..trajectory import BallSample, TableRegion, Trajectory
from .types import LaunchOutcome, SimConfig

_TWO_PI = 2.0 * math.pi

# out-of-region bounds, generous around the table
_X_MIN, _X_MAX = -3.0, 5.5
_Y_ABS_MAX = 3.0


class FlightError(ValueError):
    pass


@dataclass(frozen=True)
class TableContact:
    t: float
    x: float
    y: float


@dataclass
class FlightResult:
    """Ground-truth flight: uniform-step samples plus the exact contact."""

    times: np.ndarray          # (n,)
    positions: np.ndarray      # (n, 3)
    velocities: np.ndarray     # (n, 3)
    contact: Optional[TableContact]
    stop_reason: str           # post_bounce | floor | out_of_region | timeout | second_contact

    @property
    def bounced(self) -> bool:
        return self.contact is not None

    def trajectory(self, traj_id: str = "truth", control=None,
                   launcher_distance: float = 0.8) -> Trajectory:
        samples = [
            BallSample(float(t), float(p[0]), float(p[1]), float(p[2]))
            for t, p in zip(self.times, self.positions)
        ]
        return Trajectory(traj_id, samples, control, launcher_distance)


def _table_for(cfg: SimConfig) -> TableRegion:
    return TableRegion()


def simulate_flight(outcome: LaunchOutcome, cfg: SimConfig) -> FlightResult:
    """Integrate one launch to rest; see module docstring for the stop rules."""
    table = _table_for(cfg)
    dt = cfg.flight_dt
    m_inv = 1.0 / cfg.ball_mass
    area = cfg.ball_cross_section
    kd = 0.5 * cfg.air_density * cfg.drag_coefficient * area
    km = cfg.magnus_coefficient * cfg.air_density * area * cfg.ball_radius
    g = cfg.gravity
    r = cfg.ball_radius
    floor_z = -table.height + r

    # spin is constant over the flight, rad/s
    wx, wy, wz = (w * _TWO_PI for w in outcome.omega0)

    def accel(vx: float, vy: float, vz: float):
        speed = math.sqrt(vx * vx + vy * vy + vz * vz)
        fx = -kd * speed * vx + km * (wy * vz - wz * vy)
        fy = -kd * speed * vy + km * (wz * vx - wx * vz)
        fz = -kd * speed * vz + km * (wx * vy - wy * vx)
        return fx * m_inv, fy * m_inv, fz * m_inv - g

    px, py, pz = outcome.release_position
    vx, vy, vz = outcome.v0

    times = [0.0]
    positions = [(px, py, pz)]
    velocities = [(vx, vy, vz)]
    contact: Optional[TableContact] = None
    stop_reason = "timeout"
    t = 0.0
    stop_at = cfg.max_flight_time

    while t < stop_at - 1e-12:
        ax1, ay1, az1 = accel(vx, vy, vz)
        v2x, v2y, v2z = vx + 0.5 * dt * ax1, vy + 0.5 * dt * ay1, vz + 0.5 * dt * az1
        ax2, ay2, az2 = accel(v2x, v2y, v2z)
        v3x, v3y, v3z = vx + 0.5 * dt * ax2, vy + 0.5 * dt * ay2, vz + 0.5 * dt * az2
        ax3, ay3, az3 = accel(v3x, v3y, v3z)
        v4x, v4y, v4z = vx + dt * ax3, vy + dt * ay3, vz + dt * az3
        ax4, ay4, az4 = accel(v4x, v4y, v4z)

        nx = px + dt / 6.0 * (vx + 2.0 * (v2x + v3x) + v4x)
        ny = py + dt / 6.0 * (vy + 2.0 * (v2y + v3y) + v4y)
        nz = pz + dt / 6.0 * (vz + 2.0 * (v2z + v3z) + v4z)
        nvx = vx + dt / 6.0 * (ax1 + 2.0 * (ax2 + ax3) + ax4)
        nvy = vy + dt / 6.0 * (ay1 + 2.0 * (ay2 + ay3) + ay4)
        nvz = vz + dt / 6.0 * (az1 + 2.0 * (az2 + az3) + az4)

        if not (math.isfinite(nx) and math.isfinite(ny) and math.isfinite(nz)):
            raise FlightError("non-finite flight state")

        t_next = t + dt

        if nz < r and nvz < 0.0 and pz >= r:
            # candidate table contact inside this step
            frac = (pz - r) / (pz - nz) if pz != nz else 0.0
            frac = min(1.0, max(frac, 1e-9))
            cx = px + frac * (nx - px)
            cy = py + frac * (ny - py)
            ct = t + frac * dt
            if table.contains(cx, cy):
                if contact is not None:
                    stop_reason = "second_contact"
                    times.append(ct)
                    positions.append((cx, cy, r))
                    velocities.append((nvx, nvy, 0.0))
                    break
                contact = TableContact(ct, cx, cy)
                # rebound: vertical restitution, horizontal friction loss
                cvx = (vx + frac * (nvx - vx)) * cfg.restitution_xy
                cvy = (vy + frac * (nvy - vy)) * cfg.restitution_xy
                cvz = -(vz + frac * (nvz - vz)) * cfg.restitution_z
                times.append(ct)
                positions.append((cx, cy, r))
                velocities.append((cvx, cvy, cvz))
                px, py, pz, vx, vy, vz = cx, cy, r, cvx, cvy, cvz
                t = ct
                stop_at = min(cfg.max_flight_time, ct + cfg.post_bounce_time)
                stop_reason = "post_bounce"
                continue

        if nz < floor_z:
            frac = (pz - floor_z) / (pz - nz) if pz != nz else 0.0
            frac = min(1.0, max(frac, 1e-9))
            times.append(t + frac * dt)
            positions.append((px + frac * (nx - px), py + frac * (ny - py), floor_z))
            velocities.append((nvx, nvy, nvz))
            stop_reason = "floor"
            break

        px, py, pz, vx, vy, vz = nx, ny, nz, nvx, nvy, nvz
        t = t_next
        times.append(t)
        positions.append((px, py, pz))
        velocities.append((vx, vy, vz))

        if not (_X_MIN <= px <= _X_MAX and abs(py) <= _Y_ABS_MAX):
            stop_reason = "out_of_region"
            break
    else:
        if stop_reason != "post_bounce":
            stop_reason = "timeout" if contact is None else "post_bounce"

    return FlightResult(
        times=np.array(times),
        positions=np.array(positions),
        velocities=np.array(velocities),
        contact=contact,
        stop_reason=stop_reason,
    )


def simulate_flight_batch(
    outcomes: Sequence[LaunchOutcome], cfg: SimConfig
) -> list[FlightResult]:
    """Step many flights together on a shared grid; same dynamics as
    simulate_flight (the rebound is applied on-grid, so post-bounce samples
    can differ from the scalar path by O(dt); the contact point itself is
    interpolated identically)."""
    n = len(outcomes)
    if n == 0:
        return []
    table = _table_for(cfg)
    dt = cfg.flight_dt
    m_inv = 1.0 / cfg.ball_mass
    area = cfg.ball_cross_section
    kd = 0.5 * cfg.air_density * cfg.drag_coefficient * area
    km = cfg.magnus_coefficient * cfg.air_density * area * cfg.ball_radius
    g = cfg.gravity
    r = cfg.ball_radius
    floor_z = -table.height + r

    pos = np.array([o.release_position for o in outcomes], dtype=float)
    vel = np.array([o.v0 for o in outcomes], dtype=float)
    omega = np.array([o.omega0 for o in outcomes], dtype=float) * _TWO_PI

    max_steps = int(round(cfg.max_flight_time / dt))
    pos_hist = np.empty((max_steps + 1, n, 3))
    vel_hist = np.empty((max_steps + 1, n, 3))
    pos_hist[0] = pos
    vel_hist[0] = vel

    active = np.ones(n, dtype=bool)
    stop_step = np.full(n, max_steps, dtype=int)
    stop_reason = np.array(["timeout"] * n, dtype=object)
    contact_t = np.full(n, np.nan)
    contact_xy = np.full((n, 2), np.nan)
    stop_time = np.full(n, cfg.max_flight_time)
    bounced = np.zeros(n, dtype=bool)

    def accel(v):
        speed = np.sqrt((v * v).sum(axis=1, keepdims=True))
        return (-kd * speed * v + km * np.cross(omega, v)) * m_inv - np.array([0.0, 0.0, g])

    for k in range(max_steps):
        t = k * dt
        a1 = accel(vel)
        v2 = vel + 0.5 * dt * a1
        a2 = accel(v2)
        v3 = vel + 0.5 * dt * a2
        a3 = accel(v3)
        v4 = vel + dt * a3
        a4 = accel(v4)
        new_pos = pos + dt / 6.0 * (vel + 2.0 * (v2 + v3) + v4)
        new_vel = vel + dt / 6.0 * (a1 + 2.0 * (a2 + a3) + a4)

        if not np.isfinite(new_pos[active]).all():
            raise FlightError("non-finite flight state in batch")

        crossing = active & (new_pos[:, 2] < r) & (new_vel[:, 2] < 0.0) & (pos[:, 2] >= r)
        if crossing.any():
            idx = np.nonzero(crossing)[0]
            dz = pos[idx, 2] - new_pos[idx, 2]
            frac = np.where(dz != 0, (pos[idx, 2] - r) / np.where(dz == 0, 1.0, dz), 0.0)
            cx = pos[idx, 0] + frac * (new_pos[idx, 0] - pos[idx, 0])
            cy = pos[idx, 1] + frac * (new_pos[idx, 1] - pos[idx, 1])
            on_table = (cx >= 0.0) & (cx <= table.length) & (np.abs(cy) <= table.width / 2.0)
            for j, i in enumerate(idx):
                if not on_table[j]:
                    continue
                if bounced[i]:
                    stop_step[i] = k + 1
                    stop_reason[i] = "second_contact"
                    active[i] = False
                    continue
                bounced[i] = True
                ct = t + frac[j] * dt
                contact_t[i] = ct
                contact_xy[i] = (cx[j], cy[j])
                stop_time[i] = min(cfg.max_flight_time, ct + cfg.post_bounce_time)
                stop_reason[i] = "post_bounce"
                # on-grid rebound: reflect at contact, advance the remainder
                cv = vel[i] + frac[j] * (new_vel[i] - vel[i])
                cv = np.array([cv[0] * cfg.restitution_xy, cv[1] * cfg.restitution_xy,
                               -cv[2] * cfg.restitution_z])
                rest = (1.0 - frac[j]) * dt
                new_pos[i] = (cx[j], cy[j], r)
                new_pos[i] = new_pos[i] + cv * rest + 0.5 * np.array([0, 0, -g]) * rest * rest
                new_vel[i] = cv + np.array([0.0, 0.0, -g * rest])

        hit_floor = active & (new_pos[:, 2] < floor_z)
        out = active & ~hit_floor & (
            (new_pos[:, 0] < _X_MIN) | (new_pos[:, 0] > _X_MAX)
            | (np.abs(new_pos[:, 1]) > _Y_ABS_MAX)
        )
        timed = active & (((k + 1) * dt) >= stop_time - 1e-12)
        for mask, reason in ((hit_floor, "floor"), (out, "out_of_region")):
            if mask.any():
                ii = np.nonzero(mask)[0]
                stop_step[ii] = k + 1
                stop_reason[ii] = reason
                active[ii] = False
        if timed.any():
            ii = np.nonzero(timed & active)[0]
            for i in ii:
                if stop_reason[i] == "timeout" and bounced[i]:
                    stop_reason[i] = "post_bounce"
            stop_step[ii] = k + 1
            active[ii] = False

        pos = np.where(active[:, None], new_pos, pos)
        vel = np.where(active[:, None], new_vel, vel)
        pos_hist[k + 1] = new_pos
        vel_hist[k + 1] = new_vel
        if not active.any():
            last = int(stop_step.max())
            break
    else:
        last = max_steps

    results = []
    for i in range(n):
        s = int(stop_step[i])
        times = np.arange(s + 1) * dt
        contact = None
        if bounced[i]:
            contact = TableContact(float(contact_t[i]), float(contact_xy[i, 0]),
                                   float(contact_xy[i, 1]))
        results.append(
            FlightResult(
                times=times,
                positions=pos_hist[: s + 1, i].copy(),
                velocities=vel_hist[: s + 1, i].copy(),
                contact=contact,
                stop_reason=str(stop_reason[i]),
            )
        )
    return results
