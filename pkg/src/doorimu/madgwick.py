"""Complementary attitude filter with accelerometer feedback and gain ramp.

The filter propagates a scalar-first unit quaternion by rectangular (Euler)
integration of

    q_dot = 0.5 * q (x) [0, w + K * e]

where e is the accelerometer error term, the cross product of the normalized
specific force with a predicted gravity direction v(q), and K ramps linearly
from k_init down to k_norm over the first t_init seconds to speed up initial
convergence.

Two choices of v(q) are provided. The default ("paper") is

    v = (2 x y - 2 w z,  2 w^2 - 1 + 2 y^2,  2 y z - 2 w x)

i.e. the second column of the rotation matrix, which treats gravity as lying
along +y. "gravity_z" selects the third column (gravity along +z), the form
appropriate when the sensor's z axis is the vertical one, as with a door
rotating about a vertical hinge. With gravity on z the verbatim form settles
into a 90-degree roll and the extracted yaw stops tracking, so pick the form
that matches your mounting.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .quat import HeadingSeries, IDENTITY, Quaternion, quat_multiply, quat_normalize, quat_to_heading


@dataclass(frozen=True)
class MadgwickConfig:
    sample_period: float = 1.0 / 120.0
    k_init: float = 10.0
    k_norm: float = 0.5
    t_init: float = 3.0
    stationary_threshold: float = 0.05  # rad/s, used by the thresholded variant
    vector_form: str = "paper"  # "paper" | "gravity_z"

    def __post_init__(self) -> None:
        if self.sample_period <= 0.0:
            raise ValueError("sample_period must be positive")
        if self.t_init <= 0.0:
            raise ValueError("t_init must be positive")
        if self.k_init < 0.0 or self.k_norm < 0.0:
            raise ValueError("gains must be non-negative")
        if self.stationary_threshold < 0.0:
            raise ValueError("stationary_threshold must be non-negative")
        if self.vector_form not in ("paper", "gravity_z"):
            raise ValueError(f"unknown vector_form {self.vector_form!r}")


@dataclass
class MadgwickState:
    q: Quaternion = IDENTITY
    t: float = 0.0


def gain_at(config: MadgwickConfig, t: float) -> float:
    """Filter gain at time t: linear ramp k_init -> k_norm over t_init, then flat."""
    if t < config.t_init:
        return config.k_norm + (config.t_init - t) / config.t_init * (
            config.k_init - config.k_norm
        )
    return config.k_norm


def gravity_direction(q: Quaternion, vector_form: str = "paper") -> np.ndarray:
    """Predicted gravity direction v(q) in the sensor frame."""
    w, x, y, z = q
    if vector_form == "paper":
        return np.array(
            [2.0 * x * y - 2.0 * w * z, 2.0 * w * w - 1.0 + 2.0 * y * y, 2.0 * y * z - 2.0 * w * x]
        )
    if vector_form == "gravity_z":
        return np.array(
            [2.0 * x * z - 2.0 * w * y, 2.0 * w * x + 2.0 * y * z, 2.0 * w * w - 1.0 + 2.0 * z * z]
        )
    raise ValueError(f"unknown vector_form {vector_form!r}")


def accel_error(q: Quaternion, f: np.ndarray, vector_form: str = "paper") -> np.ndarray:
    """Error term e = f_hat x v(q); zero when the accelerometer reads zero."""
    f = np.asarray(f, dtype=float)
    norm = float(np.linalg.norm(f))
    if norm == 0.0:
        return np.zeros(3)
    return np.cross(f / norm, gravity_direction(q, vector_form))


def step(
    state: MadgwickState,
    config: MadgwickConfig,
    w: np.ndarray,
    f: np.ndarray,
) -> MadgwickState:
    """One rectangular update over config.sample_period with gyro w (rad/s)
    and specific force f (m/s^2). Returns the new state; input is unchanged."""
    e = accel_error(state.q, f, config.vector_form)
    k = gain_at(config, state.t)
    wc = np.asarray(w, dtype=float) + k * e
    rate = Quaternion(0.0, wc[0], wc[1], wc[2])
    q_dot = quat_multiply(state.q, rate)
    dt = config.sample_period
    q = Quaternion(
        state.q.w + 0.5 * q_dot.w * dt,
        state.q.x + 0.5 * q_dot.x * dt,
        state.q.y + 0.5 * q_dot.y * dt,
        state.q.z + 0.5 * q_dot.z * dt,
    )
    return MadgwickState(q=quat_normalize(q), t=state.t + dt)


def run(
    config: MadgwickConfig,
    t: np.ndarray,
    gyro: np.ndarray,
    accel: np.ndarray,
    state: MadgwickState | None = None,
) -> HeadingSeries:
    """Filter a whole recording; heading in degrees at each input timestamp.

    t: (N,) seconds (used for the output series; stepping is at
    config.sample_period). gyro: (N, 3) rad/s. accel: (N, 3) m/s^2.
    """
    t = np.asarray(t, dtype=float)
    gyro = np.asarray(gyro, dtype=float)
    accel = np.asarray(accel, dtype=float)
    if gyro.shape != (t.size, 3) or accel.shape != (t.size, 3):
        raise ValueError("gyro and accel must be (N, 3) matching t")
    state = state or MadgwickState()
    heading = np.empty(t.size)
    for i in range(t.size):
        state = step(state, config, gyro[i], accel[i])
        heading[i] = quat_to_heading(state.q)
    return HeadingSeries(t, np.unwrap(heading, period=360.0))


def run_thresholded(
    config: MadgwickConfig,
    t: np.ndarray,
    gyro: np.ndarray,
    accel: np.ndarray,
    state: MadgwickState | None = None,
) -> HeadingSeries:
    """Like run(), but the reported heading holds its last value whenever the
    gyro norm is below config.stationary_threshold. The internal quaternion
    keeps integrating, so tracking resumes seamlessly when motion returns."""
    t = np.asarray(t, dtype=float)
    gyro = np.asarray(gyro, dtype=float)
    accel = np.asarray(accel, dtype=float)
    if gyro.shape != (t.size, 3) or accel.shape != (t.size, 3):
        raise ValueError("gyro and accel must be (N, 3) matching t")
    state = state or MadgwickState()
    heading = np.empty(t.size)
    raw = np.empty(t.size)
    last = quat_to_heading(state.q)
    offset = 0.0  # unwrap continuity across held spans
    prev_raw = last
    for i in range(t.size):
        state = step(state, config, gyro[i], accel[i])
        h = quat_to_heading(state.q)
        delta = h - prev_raw
        if delta > 180.0:
            offset -= 360.0
        elif delta < -180.0:
            offset += 360.0
        prev_raw = h
        raw[i] = h + offset
        if float(np.linalg.norm(gyro[i])) >= config.stationary_threshold:
            last = raw[i]
        heading[i] = last
    return HeadingSeries(t, heading)
