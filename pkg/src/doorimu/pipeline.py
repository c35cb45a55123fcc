"""Recorded-session ingestion and preparation for the window regressors.

The chain mirrors how the door recordings are conditioned before training:

    load_csv / load_gt_csv     CSV -> RecordingSession / HeadingSeries
    calibrate_gyro             subtract the stationary-start bias estimate
    detect_shut_periods        rate-magnitude stillness detector
    enforce_zero_drift         re-zero the reference heading at each shut start
    make_windows               cut 20-sample windows, target = heading increment
    reconstruct_heading        cumulative sum of increments back to a heading
    split_train_val            seeded split at whole-experiment granularity

File units: time s, specific force m/s^2, angular rate deg/s. In memory the
rates are rad/s throughout; headings stay in degrees.

All operations are pure: they build new sessions/series and never mutate
their inputs, so distinct sessions can be processed concurrently.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .quat import HeadingSeries


@dataclass(frozen=True)
class CsvSchema:
    """Column names of an IMU CSV; rates are stored in the file in deg/s."""

    time: str = "t"
    accel: tuple = ("fx", "fy", "fz")
    gyro: tuple = ("wx", "wy", "wz")

    def columns(self):
        return (self.time, *self.accel, *self.gyro)


IMU_SCHEMA = CsvSchema()

GT_COLUMNS = ("t", "heading_deg")


class ImuSample(NamedTuple):
    t: float
    f: np.ndarray  # specific force, m/s^2
    w: np.ndarray  # angular rate, rad/s


class WindowSample(NamedTuple):
    gyro_window: np.ndarray   # (window_len, 3) rad/s
    accel_window: np.ndarray  # (window_len, 3) m/s^2
    target: float             # heading increment over the window, degrees
    t_start: float
    t_end: float


@dataclass
class RecordingSession:
    """One contiguous recording: time base, both sensor streams, optional
    reference heading."""

    imu_id: str
    rate_hz: float
    t: np.ndarray
    accel: np.ndarray
    gyro: np.ndarray
    gt: HeadingSeries | None = None

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.accel = np.asarray(self.accel, dtype=float)
        self.gyro = np.asarray(self.gyro, dtype=float)
        n = self.t.size
        if self.t.ndim != 1 or n < 2:
            raise ValueError("session needs a 1-D time base with at least 2 samples")
        if self.accel.shape != (n, 3) or self.gyro.shape != (n, 3):
            raise ValueError("accel and gyro must both be (N, 3)")
        if not (np.all(np.isfinite(self.t)) and np.all(np.isfinite(self.accel))
                and np.all(np.isfinite(self.gyro))):
            raise ValueError("session contains non-finite values")
        if np.any(np.diff(self.t) <= 0.0):
            raise ValueError("session timestamps must be strictly increasing")
        if self.rate_hz <= 0.0:
            raise ValueError("rate_hz must be positive")
        if self.gt is not None:
            if self.gt.t[0] > self.t[-1] or self.gt.t[-1] < self.t[0]:
                raise ValueError("ground-truth span does not overlap the session")

    def __len__(self):
        return self.t.size

    @property
    def samples(self):
        return [ImuSample(float(self.t[i]), self.accel[i], self.gyro[i])
                for i in range(self.t.size)]


def _read_rows(path, columns):
    """Parse a headered CSV into one float column per requested name.

    Reports missing columns by name and bad cells by 1-based line number."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        missing = [c for c in columns if c not in header]
        if missing:
            raise ValueError(f"{path}: missing column(s) {', '.join(missing)}")
        index = [header.index(c) for c in columns]
        out = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                out.append([float(row[k]) for k in index])
            except (ValueError, IndexError):
                raise ValueError(f"{path}: unparseable row at line {lineno}") from None
    if not out:
        raise ValueError(f"{path}: no data rows")
    return np.asarray(out, dtype=float)


def _sort_dedup(t, *arrays):
    """Time-sort rows and drop duplicate timestamps, keeping the first."""
    order = np.argsort(t, kind="stable")
    t = t[order]
    keep = np.concatenate([[True], np.diff(t) > 0.0])
    return (t[keep], *[a[order][keep] for a in arrays])


def load_csv(path, schema: CsvSchema = IMU_SCHEMA) -> RecordingSession:
    """Read an IMU CSV into a session; rates convert from deg/s to rad/s."""
    data = _read_rows(path, schema.columns())
    t, accel, gyro = _sort_dedup(data[:, 0], data[:, 1:4], data[:, 4:7])
    if t.size < 2:
        raise ValueError(f"{path}: need at least 2 distinct timestamps")
    rate = 1.0 / float(np.median(np.diff(t)))
    return RecordingSession(
        imu_id=Path(path).stem,
        rate_hz=rate,
        t=t,
        accel=accel,
        gyro=np.radians(gyro),
    )


def load_gt_csv(path) -> HeadingSeries:
    """Read a reference-heading CSV (columns t, heading_deg)."""
    data = _read_rows(path, GT_COLUMNS)
    t, heading = _sort_dedup(data[:, 0], data[:, 1])
    return HeadingSeries(t, heading)


def load_session(imu_path, gt_path=None, schema: CsvSchema = IMU_SCHEMA) -> RecordingSession:
    session = load_csv(imu_path, schema)
    if gt_path is not None:
        session = replace(session, gt=load_gt_csv(gt_path))
    return session


def estimate_gyro_bias(session: RecordingSession, window: int = 40) -> np.ndarray:
    """Per-axis mean rate over the first `window` samples (sensor assumed
    still there), in rad/s."""
    window = int(window)
    if window < 2:
        raise ValueError("calibration window must span at least 2 samples")
    if len(session) < window:
        raise ValueError(
            f"session has {len(session)} samples, shorter than the "
            f"{window}-sample calibration window"
        )
    return session.gyro[:window].mean(axis=0)


def calibrate_gyro(session: RecordingSession, window: int = 40) -> RecordingSession:
    """Subtract the stationary-start bias estimate from every rate sample."""
    bias = estimate_gyro_bias(session, window)
    return replace(session, gyro=session.gyro - bias)


def detect_shut_periods(session: RecordingSession, threshold: float = 0.05,
                        min_duration: float = 2.0) -> list:
    """Maximal intervals where the rate magnitude stays below `threshold`
    (rad/s) for at least `min_duration` seconds, as (t_start, t_end) pairs.

    Purely a stillness detector: a door held open is as still as a shut one,
    so callers that need actually-shut periods must also check the heading
    (see preprocess_session)."""
    if threshold <= 0.0 or min_duration < 0.0:
        raise ValueError("threshold must be positive and min_duration non-negative")
    quiet = np.linalg.norm(session.gyro, axis=1) < threshold
    flags = quiet.astype(np.int8)
    starts = np.flatnonzero(np.diff(np.concatenate([[0], flags])) == 1)
    ends = np.flatnonzero(np.diff(np.concatenate([flags, [0]])) == -1)
    out = []
    for s, e in zip(starts, ends):
        if session.t[e] - session.t[s] >= min_duration:
            out.append((float(session.t[s]), float(session.t[e])))
    return out


def _check_intervals(series: HeadingSeries, intervals):
    ordered = sorted((float(a), float(b)) for a, b in intervals)
    for a, b in ordered:
        if not a < b:
            raise ValueError(f"empty or inverted interval ({a}, {b})")
        if a < series.t[0] or b > series.t[-1]:
            raise ValueError(f"interval ({a}, {b}) outside the series span")
    for (a0, b0), (a1, b1) in zip(ordered, ordered[1:]):
        if a1 < b0:
            raise ValueError(f"overlapping intervals ({a0}, {b0}) and ({a1}, {b1})")
    return ordered


def enforce_zero_drift(heading: HeadingSeries, shut_intervals) -> HeadingSeries:
    """Re-zero the heading at the start of every shut interval and pin it to
    exactly 0 while the door stays shut.

    At each interval start the value there is subtracted from that point
    onward, so drift accumulated since the previous shut period is removed;
    within the interval the output is identically 0."""
    intervals = _check_intervals(heading, shut_intervals)
    out = heading.heading_deg.copy()
    t = heading.t
    for a, b in intervals:
        start = int(np.searchsorted(t, a, side="left"))
        out[start:] -= out[start]
        inside = (t >= a) & (t <= b)
        out[inside] = 0.0
    return HeadingSeries(t.copy(), out)


def make_windows(session: RecordingSession, gt: HeadingSeries | None = None,
                 window_len: int = 20, stride: int = 20) -> list:
    """Cut the session into fixed-length windows whose target is the
    reference heading increment across the window.

    The reference is linearly interpolated onto the sensor timestamps, so a
    faster reference clock is fine; gaps in it wider than one window are an
    error rather than silently interpolated through."""
    if gt is None:
        gt = session.gt
    if gt is None:
        raise ValueError("no ground-truth heading supplied for windowing")
    if window_len < 2 or stride < 1:
        raise ValueError("window_len must be >= 2 and stride >= 1")
    n = len(session)
    if n < window_len:
        return []
    span = window_len / session.rate_hz
    gaps = np.diff(gt.t)
    if gaps.size and float(np.max(gaps)) > span:
        raise ValueError(
            f"ground-truth gap of {float(np.max(gaps)):.3f} s exceeds one "
            f"window ({span:.3f} s)"
        )
    starts = np.arange(0, n - window_len + 1, stride)
    t_firsts = session.t[starts]
    t_lasts = session.t[starts + window_len - 1]
    if t_firsts.size and (t_firsts[0] < gt.t[0] or t_lasts[-1] > gt.t[-1]):
        raise ValueError("ground truth does not cover the windowed span")
    h_first = gt.at(t_firsts)
    h_last = gt.at(t_lasts)
    out = []
    for k, s in enumerate(starts):
        out.append(WindowSample(
            gyro_window=session.gyro[s : s + window_len].copy(),
            accel_window=session.accel[s : s + window_len].copy(),
            target=float(h_last[k] - h_first[k]),
            t_start=float(t_firsts[k]),
            t_end=float(t_lasts[k]),
        ))
    return out


def window_matrices(windows):
    """Stack windows for training: (gyro (N,L,3), accel (N,L,3), targets (N,),
    end times (N,))."""
    if not windows:
        raise ValueError("no windows to stack")
    gyro = np.stack([w.gyro_window for w in windows])
    accel = np.stack([w.accel_window for w in windows])
    targets = np.array([w.target for w in windows])
    t_end = np.array([w.t_end for w in windows])
    return gyro, accel, targets, t_end


def reconstruct_heading(targets, psi0: float = 0.0, t=None) -> HeadingSeries:
    """Cumulative sum of window increments, one point per window end.

    Without explicit times the points sit at 1..n (window index)."""
    inc = np.asarray(targets, dtype=float)
    if inc.ndim != 1:
        raise ValueError("targets must be 1-D")
    heading = psi0 + np.cumsum(inc)
    if t is None:
        t = np.arange(1, inc.size + 1, dtype=float)
    t = np.asarray(t, dtype=float)
    if t.shape != inc.shape:
        raise ValueError("t must match targets in length")
    return HeadingSeries(t, heading)


def split_experiments(ids, val_fraction: float, seed: int):
    """Seeded experiment-level split: returns (train_ids, val_ids).

    Validation gets round(val_fraction * n) whole experiments, clamped so
    both sides keep at least one."""
    ids = sorted(ids)
    if len(ids) < 2:
        raise ValueError("need at least 2 experiments to split")
    if not 0.0 < val_fraction < 1.0:
        raise ValueError("val_fraction must be in (0, 1)")
    n_val = int(round(val_fraction * len(ids)))
    n_val = min(max(n_val, 1), len(ids) - 1)
    order = np.random.default_rng(seed).permutation(len(ids))
    val_ids = {ids[i] for i in order[:n_val]}
    train = [i for i in ids if i not in val_ids]
    val = [i for i in ids if i in val_ids]
    return train, val


def split_train_val(windows_by_experiment, val_fraction: float, seed: int):
    """Split windows with whole experiments kept on one side (no leakage
    of adjacent windows across the boundary). Input: {experiment_id:
    [WindowSample, ...]}. Returns flat (train_windows, val_windows)."""
    train_ids, val_ids = split_experiments(windows_by_experiment, val_fraction, seed)
    train = [w for i in train_ids for w in windows_by_experiment[i]]
    val = [w for i in val_ids for w in windows_by_experiment[i]]
    return train, val


@dataclass
class PreprocessedSession:
    """Output of the full conditioning chain for one recording."""

    session: RecordingSession          # calibrated rates, re-zeroed reference
    gyro_bias: np.ndarray              # rad/s estimate that was removed
    shut_intervals: list               # intervals the reference was pinned on
    still_intervals: list = field(default_factory=list)  # all stillness spans


def preprocess_session(session: RecordingSession, calibration_window: int = 40,
                       shut_threshold: float = 0.05, min_shut_duration: float = 2.0,
                       max_shut_heading_deg: float = 5.0) -> PreprocessedSession:
    """Full conditioning chain: calibrate rates, find stillness, keep only
    the still spans where the reference stays near zero (the door can be
    held open just as still), and re-zero the reference on those.

    Requires a reference heading on the session."""
    if session.gt is None:
        raise ValueError("preprocessing needs a reference heading on the session")
    bias = estimate_gyro_bias(session, calibration_window)
    calibrated = replace(session, gyro=session.gyro - bias)
    still = detect_shut_periods(calibrated, shut_threshold, min_shut_duration)
    shut = []
    for a, b in still:
        inside = (session.gt.t >= a) & (session.gt.t <= b)
        if np.all(np.abs(session.gt.heading_deg[inside]) <= max_shut_heading_deg):
            shut.append((a, b))
    gt = enforce_zero_drift(session.gt, shut) if shut else session.gt
    return PreprocessedSession(
        session=replace(calibrated, gt=gt),
        gyro_bias=bias,
        shut_intervals=shut,
        still_intervals=still,
    )


MANIFEST_KIND = "doorimu-corpus"
MANIFEST_ROLES = ("train", "val", "test")


def load_manifest(path) -> dict:
    """Read and validate a corpus manifest (see simulate.generate_corpus)."""
    path = Path(path)
    try:
        manifest = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise ValueError(f"{path}: not valid JSON ({err})") from None
    if not isinstance(manifest, dict):
        raise ValueError(f"{path}: manifest must be a JSON object")
    if manifest.get("kind") != MANIFEST_KIND:
        raise ValueError(f"{path}: kind must be {MANIFEST_KIND!r}")
    if manifest.get("schema_version") != 1:
        raise ValueError(f"{path}: unsupported schema_version "
                         f"{manifest.get('schema_version')!r}")
    sessions = manifest.get("sessions")
    if not isinstance(sessions, list) or not sessions:
        raise ValueError(f"{path}: sessions must be a non-empty list")
    for i, entry in enumerate(sessions):
        for key in ("name", "imu", "gt", "role", "calibration_window"):
            if key not in entry:
                raise ValueError(f"{path}: sessions[{i}] missing {key!r}")
        if entry["role"] not in MANIFEST_ROLES:
            raise ValueError(
                f"{path}: sessions[{i}] role {entry['role']!r} not one of "
                f"{'/'.join(MANIFEST_ROLES)}"
            )
        if not isinstance(entry["calibration_window"], int) or entry["calibration_window"] < 2:
            raise ValueError(f"{path}: sessions[{i}] calibration_window must be an int >= 2")
    return manifest


def load_manifest_session(manifest_path, entry, schema: CsvSchema = IMU_SCHEMA) -> RecordingSession:
    """Load one manifest entry's CSVs, resolving paths next to the manifest."""
    base = Path(manifest_path).parent
    session = load_session(base / entry["imu"], base / entry["gt"], schema)
    return replace(session, imu_id=entry["name"])
