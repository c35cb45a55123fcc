"""Quaternion helpers and dead-reckoning heading integration.

Convention: quaternions are scalar-first (w, x, y, z) and unit-norm unless
stated otherwise. Euler extraction follows the ZYX (yaw-pitch-roll) order;
heading is the yaw angle about z. Angles cross the API boundary in degrees,
angular rates in rad/s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np


class Quaternion(NamedTuple):
    w: float
    x: float
    y: float
    z: float


IDENTITY = Quaternion(1.0, 0.0, 0.0, 0.0)

_AXIS_INDEX = {"x": 0, "y": 1, "z": 2, 0: 0, 1: 1, 2: 2}


@dataclass
class HeadingSeries:
    """Heading angle over time: t in seconds, heading in degrees."""

    t: np.ndarray
    heading_deg: np.ndarray

    def __post_init__(self) -> None:
        self.t = np.asarray(self.t, dtype=float)
        self.heading_deg = np.asarray(self.heading_deg, dtype=float)
        if self.t.shape != self.heading_deg.shape or self.t.ndim != 1:
            raise ValueError("t and heading_deg must be 1-D arrays of equal length")

    def __len__(self) -> int:
        return self.t.size

    def at(self, t: np.ndarray | float) -> np.ndarray | float:
        """Linear interpolation of the heading at time(s) t."""
        return np.interp(t, self.t, self.heading_deg)


def quat_multiply(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product a*b (applies b's rotation in a's local frame)."""
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return Quaternion(
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    )


def quat_normalize(q: Quaternion) -> Quaternion:
    n = math.sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z)
    if n == 0.0 or not math.isfinite(n):
        raise ValueError("cannot normalize a zero or non-finite quaternion")
    return Quaternion(q.w / n, q.x / n, q.y / n, q.z / n)


def quat_conjugate(q: Quaternion) -> Quaternion:
    return Quaternion(q.w, -q.x, -q.y, -q.z)


def quat_rotate(q: Quaternion, v: Sequence[float]) -> np.ndarray:
    """Rotate a 3-vector by the unit quaternion q (q * [0,v] * q^-1)."""
    p = Quaternion(0.0, float(v[0]), float(v[1]), float(v[2]))
    r = quat_multiply(quat_multiply(q, p), quat_conjugate(q))
    return np.array([r.x, r.y, r.z])


def quat_to_heading(q: Quaternion) -> float:
    """Yaw of the ZYX Euler decomposition, in degrees, range (-180, 180]."""
    w, x, y, z = q
    psi = math.degrees(math.atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z)))
    if psi <= -180.0:
        psi += 360.0
    return psi


def heading_wrap(deg: np.ndarray | float) -> np.ndarray | float:
    """Wrap angle(s) in degrees to (-180, 180]. Display helper only;
    internal heading series stay unwrapped."""
    wrapped = -np.mod(-np.asarray(deg, dtype=float) + 180.0, 360.0) + 180.0
    if np.ndim(deg) == 0:
        return float(wrapped)
    return wrapped


def integrate_gyro(
    t: np.ndarray,
    rates: np.ndarray,
    psi0_deg: float = 0.0,
    axis: str | int = "z",
) -> HeadingSeries:
    """Trapezoidal integration of one angular-rate axis into a heading series.

    t: (N,) timestamps in seconds, strictly increasing, N >= 2.
    rates: (N,) or (N, 3) angular rate in rad/s; with (N, 3) the integrated
        column is chosen by `axis` ('x'|'y'|'z' or 0|1|2).
    Returns the heading in degrees at every timestamp, starting at psi0_deg.
    """
    t = np.asarray(t, dtype=float)
    rates = np.asarray(rates, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise ValueError("need at least 2 samples to integrate")
    if np.any(np.diff(t) <= 0.0):
        raise ValueError("timestamps must be strictly increasing")
    if rates.ndim == 2:
        try:
            w = rates[:, _AXIS_INDEX[axis]]
        except KeyError:
            raise ValueError(f"bad axis selector {axis!r}") from None
    elif rates.ndim == 1:
        w = rates
    else:
        raise ValueError("rates must be (N,) or (N, 3)")
    if w.shape != t.shape:
        raise ValueError("rates and timestamps disagree in length")

    dt = np.diff(t)
    increments = 0.5 * (w[:-1] + w[1:]) * dt
    psi = np.empty_like(t)
    psi[0] = 0.0
    np.cumsum(increments, out=psi[1:])
    return HeadingSeries(t, psi0_deg + np.degrees(psi))
