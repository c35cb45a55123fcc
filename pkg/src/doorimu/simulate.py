"""Synthetic door-swing sessions with exact ground truth.

A door rotates about a vertical hinge. The sensor sits on the door leaf at a
lever arm r from the hinge axis, axes: x radially outward (hinge to sensor),
y tangential in the opening sense, z up along the hinge. Each opening event
follows a minimum-jerk angle profile (C2-continuous: rate and angular
acceleration are zero at both ends), so the analytic angle, rate and angular
acceleration are all available in closed form.

Measurements:
    gyro  = (0, 0, psi_dot) + bias + white noise
    accel = (-r * psi_dot^2, r * psi_ddot, g) + bias + white noise

with discrete noise sigma = density * sqrt(sample_rate). Everything is driven
by one seed; identical configs and seed give byte-identical output files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .quat import HeadingSeries

GRAVITY = 9.80665

DEG_PER_HOUR = math.pi / 180.0 / 3600.0  # deg/h -> rad/s


@dataclass(frozen=True)
class OpeningEvent:
    """One open-hold-close cycle: start time, peak angle, leg durations (s)."""

    start: float
    peak_deg: float
    open_duration: float
    hold_duration: float
    close_duration: float

    def __post_init__(self) -> None:
        if not 0.0 < self.peak_deg < 180.0:
            raise ValueError("peak angle must be in (0, 180) degrees")
        if min(self.open_duration, self.close_duration) <= 0.0 or self.hold_duration < 0.0:
            raise ValueError("durations must be positive (hold may be zero)")

    @property
    def end(self) -> float:
        return self.start + self.open_duration + self.hold_duration + self.close_duration


@dataclass(frozen=True)
class DoorScenario:
    duration: float = 60.0
    sample_rate: float = 120.0
    lever_arm: float = 0.75  # m, hinge to sensor
    events: tuple[OpeningEvent, ...] = ()

    def __post_init__(self) -> None:
        if self.duration <= 0.0 or self.sample_rate <= 0.0 or self.lever_arm < 0.0:
            raise ValueError("duration and sample_rate must be positive, lever_arm >= 0")
        prev_end = 0.0
        for ev in self.events:
            if ev.start < prev_end:
                raise ValueError("opening events overlap or start before 0")
            prev_end = ev.end
        if self.events and prev_end > self.duration:
            raise ValueError("events extend past the scenario duration")


@dataclass(frozen=True)
class SensorErrorModel:
    gyro_bias: tuple[float, float, float] = (0.0, 0.0, 0.0)  # rad/s
    gyro_noise_density: float = 0.0  # rad/s/sqrt(Hz)
    accel_bias: tuple[float, float, float] = (0.0, 0.0, 0.0)  # m/s^2
    accel_noise_density: float = 0.0  # m/s^2/sqrt(Hz)
    seed: int = 0


#: datasheet-class consumer IMU noise, used by the corpus generator defaults
DEFAULT_GYRO_NOISE = math.radians(0.007)  # rad/s/sqrt(Hz)
DEFAULT_ACCEL_NOISE = 9.81e-4  # ~100 ug/sqrt(Hz)


def _minjerk(tau: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Minimum-jerk unit ramp s(tau) on [0, 1] and its first two derivatives."""
    s = tau**3 * (10.0 - 15.0 * tau + 6.0 * tau**2)
    ds = tau**2 * (30.0 - 60.0 * tau + 30.0 * tau**2)
    dds = tau * (60.0 - 180.0 * tau + 120.0 * tau**2)
    return s, ds, dds


def angle_profile(
    events: tuple[OpeningEvent, ...] | list[OpeningEvent], t: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Door angle (deg), rate (deg/s) and angular acceleration (deg/s^2) at t."""
    t = np.asarray(t, dtype=float)
    angle = np.zeros_like(t)
    rate = np.zeros_like(t)
    acc = np.zeros_like(t)
    for ev in events:
        t1 = ev.start + ev.open_duration
        t2 = t1 + ev.hold_duration
        m = (t >= ev.start) & (t < t1)
        if m.any():
            tau = (t[m] - ev.start) / ev.open_duration
            s, ds, dds = _minjerk(tau)
            angle[m] = ev.peak_deg * s
            rate[m] = ev.peak_deg * ds / ev.open_duration
            acc[m] = ev.peak_deg * dds / ev.open_duration**2
        m = (t >= t1) & (t < t2)
        angle[m] = ev.peak_deg
        m = (t >= t2) & (t < ev.end)
        if m.any():
            tau = (t[m] - t2) / ev.close_duration
            s, ds, dds = _minjerk(tau)
            angle[m] = ev.peak_deg * (1.0 - s)
            rate[m] = -ev.peak_deg * ds / ev.close_duration
            acc[m] = -ev.peak_deg * dds / ev.close_duration**2
    return angle, rate, acc


def generate(
    scenario: DoorScenario, errors: SensorErrorModel | None = None
) -> tuple["np.ndarray", np.ndarray, np.ndarray, HeadingSeries]:
    """Simulate one session.

    Returns (t, gyro, accel, gt): timestamps (N,), gyro (N, 3) rad/s,
    accelerometer (N, 3) m/s^2, and the exact ground-truth heading series in
    degrees at the same timestamps.
    """
    errors = errors or SensorErrorModel()
    n = int(round(scenario.duration * scenario.sample_rate))
    t = np.arange(n) / scenario.sample_rate
    angle_deg, rate_deg, acc_deg = angle_profile(scenario.events, t)
    rate = np.radians(rate_deg)
    acc = np.radians(acc_deg)

    gyro = np.zeros((n, 3))
    gyro[:, 2] = rate
    accel = np.empty((n, 3))
    accel[:, 0] = -scenario.lever_arm * rate**2
    accel[:, 1] = scenario.lever_arm * acc
    accel[:, 2] = GRAVITY

    gyro += np.asarray(errors.gyro_bias, dtype=float)
    accel += np.asarray(errors.accel_bias, dtype=float)
    if errors.gyro_noise_density > 0.0 or errors.accel_noise_density > 0.0:
        rng = np.random.default_rng(errors.seed)
        root_fs = math.sqrt(scenario.sample_rate)
        gyro += rng.normal(0.0, 1.0, (n, 3)) * (errors.gyro_noise_density * root_fs)
        accel += rng.normal(0.0, 1.0, (n, 3)) * (errors.accel_noise_density * root_fs)

    return t, gyro, accel, HeadingSeries(t, angle_deg)


# ---------------------------------------------------------------------------
# corpus generation


@dataclass(frozen=True)
class CorpusConfig:
    """Randomized multi-session corpus written in the canonical CSV layout."""

    n_sessions: int = 16
    session_duration: float = 290.0
    sample_rate: float = 120.0
    lever_arm: float = 0.75
    peak_angles_deg: tuple[float, ...] = (15.0, 30.0, 45.0, 60.0, 75.0, 90.0)
    # leg duration range per swing speed class, seconds
    speed_classes: tuple[tuple[float, float], ...] = ((1.2, 2.0), (2.0, 3.5), (3.5, 5.5))
    openings_per_session: tuple[int, int] = (9, 11)
    hold_range: tuple[float, float] = (2.2, 5.0)
    gap_range: tuple[float, float] = (2.2, 6.0)
    gyro_bias_range_deg_h: tuple[float, float] = (25.0, 50.0)
    accel_bias_range: tuple[float, float] = (0.005, 0.02)  # m/s^2
    gyro_noise_density: float = DEFAULT_GYRO_NOISE
    accel_noise_density: float = DEFAULT_ACCEL_NOISE
    val_sessions: int = 2
    test_sessions: int = 2
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_sessions < 3:
            raise ValueError("n_sessions must be >= 3 (train/val/test)")
        if self.val_sessions + self.test_sessions >= self.n_sessions:
            raise ValueError(
                "val_sessions + test_sessions must leave at least one train session")
        named_ranges = {
            "speed_classes": self.speed_classes,
            "hold_range": (self.hold_range,),
            "gap_range": (self.gap_range,),
            "gyro_bias_range_deg_h": (self.gyro_bias_range_deg_h,),
            "accel_bias_range": (self.accel_bias_range,),
        }
        for field_name, ranges in named_ranges.items():
            for lo, hi in ranges:
                if not 0.0 <= lo <= hi:
                    raise ValueError(f"{field_name} must satisfy 0 <= lo <= hi")
        for a in self.peak_angles_deg:
            if not 0.0 < a < 180.0:
                raise ValueError(
                    f"peak_angles_deg must be in (0, 180), got {a}")


def _random_scenario(cfg: CorpusConfig, rng: np.random.Generator) -> DoorScenario:
    events = []
    t = float(rng.uniform(*cfg.gap_range))
    n_open = int(rng.integers(cfg.openings_per_session[0], cfg.openings_per_session[1] + 1))
    for _ in range(n_open):
        speed = cfg.speed_classes[int(rng.integers(len(cfg.speed_classes)))]
        ev = OpeningEvent(
            start=t,
            peak_deg=float(cfg.peak_angles_deg[int(rng.integers(len(cfg.peak_angles_deg)))]),
            open_duration=float(rng.uniform(*speed)),
            hold_duration=float(rng.uniform(*cfg.hold_range)),
            close_duration=float(rng.uniform(*speed)),
        )
        if ev.end > cfg.session_duration - cfg.gap_range[1]:
            break
        events.append(ev)
        t = ev.end + float(rng.uniform(*cfg.gap_range))
    return DoorScenario(
        duration=cfg.session_duration,
        sample_rate=cfg.sample_rate,
        lever_arm=cfg.lever_arm,
        events=tuple(events),
    )


def _random_errors(cfg: CorpusConfig, rng: np.random.Generator, seed: int) -> SensorErrorModel:
    lo, hi = cfg.gyro_bias_range_deg_h
    gyro_bias = rng.uniform(lo, hi, 3) * rng.choice([-1.0, 1.0], 3) * DEG_PER_HOUR
    alo, ahi = cfg.accel_bias_range
    accel_bias = rng.uniform(alo, ahi, 3) * rng.choice([-1.0, 1.0], 3)
    return SensorErrorModel(
        gyro_bias=tuple(gyro_bias),
        gyro_noise_density=cfg.gyro_noise_density,
        accel_noise_density=cfg.accel_noise_density,
        accel_bias=tuple(accel_bias),
        seed=seed,
    )


def _write_csv(path: Path, header: str, columns: list[np.ndarray]) -> None:
    data = np.column_stack(columns)
    np.savetxt(path, data, fmt="%.12g", delimiter=",", header=header, comments="")


def generate_corpus(cfg: CorpusConfig, out_dir: str | Path) -> Path:
    """Write a randomized corpus: per-session IMU and GT CSVs plus a manifest.

    Returns the manifest path. Output is byte-identical for identical
    (cfg, out_dir basename-independent) inputs.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    master = np.random.SeedSequence(cfg.seed)
    session_seeds = master.spawn(cfg.n_sessions)
    role_rng = np.random.default_rng(master.spawn(1)[0])
    order = role_rng.permutation(cfg.n_sessions)
    roles = {}
    for rank, idx in enumerate(order):
        if rank < cfg.test_sessions:
            roles[int(idx)] = "test"
        elif rank < cfg.test_sessions + cfg.val_sessions:
            roles[int(idx)] = "val"
        else:
            roles[int(idx)] = "train"

    sessions = []
    for i in range(cfg.n_sessions):
        rng = np.random.default_rng(session_seeds[i])
        scenario = _random_scenario(cfg, rng)
        errors = _random_errors(cfg, rng, seed=int(rng.integers(2**31)))
        t, gyro, accel, gt = generate(scenario, errors)
        name = f"session_{i:03d}"
        imu_path = out / f"{name}.csv"
        gt_path = out / f"{name}_gt.csv"
        _write_csv(
            imu_path,
            "t,fx,fy,fz,wx,wy,wz",
            [t, accel[:, 0], accel[:, 1], accel[:, 2], *(np.degrees(gyro[:, k]) for k in range(3))],
        )
        _write_csv(gt_path, "t,heading_deg", [gt.t, gt.heading_deg])
        sessions.append(
            {
                "name": name,
                "imu": imu_path.name,
                "gt": gt_path.name,
                "role": roles[i],
                "sample_rate": cfg.sample_rate,
                "calibration_window": 40,
                "gyro_bias_deg_h": [b / DEG_PER_HOUR for b in errors.gyro_bias],
            }
        )

    manifest = {
        "schema_version": 1,
        "kind": "doorimu-corpus",
        "seed": cfg.seed,
        "sample_rate": cfg.sample_rate,
        "sessions": sessions,
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest_path
