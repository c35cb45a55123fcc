"""Heading estimation toolkit for door-mounted inertial sensors.

Gyro integration and complementary-filter baselines, a synthetic door-motion
simulator, a windowed preprocessing pipeline, learned window regressors with a
self-contained numpy training engine, and increment-based error metrics.
"""

__version__ = "0.1.0"

from .madgwick import MadgwickConfig, MadgwickState
from .metrics import MetricsReport, evaluate, heading_rmse, lpd, mad, rmse
from .pipeline import (
    RecordingSession,
    WindowSample,
    calibrate_gyro,
    detect_shut_periods,
    enforce_zero_drift,
    load_csv,
    load_gt_csv,
    make_windows,
    preprocess_session,
    reconstruct_heading,
    split_train_val,
)
from .quat import (
    HeadingSeries,
    Quaternion,
    heading_wrap,
    integrate_gyro,
    quat_multiply,
    quat_normalize,
    quat_to_heading,
)
from .simulate import CorpusConfig, DoorScenario, OpeningEvent, generate, generate_corpus

__all__ = [
    "CorpusConfig",
    "DoorScenario",
    "HeadingSeries",
    "MadgwickConfig",
    "MadgwickState",
    "MetricsReport",
    "OpeningEvent",
    "Quaternion",
    "RecordingSession",
    "WindowSample",
    "calibrate_gyro",
    "detect_shut_periods",
    "enforce_zero_drift",
    "evaluate",
    "generate",
    "generate_corpus",
    "heading_rmse",
    "heading_wrap",
    "integrate_gyro",
    "load_csv",
    "load_gt_csv",
    "lpd",
    "mad",
    "make_windows",
    "preprocess_session",
    "quat_multiply",
    "quat_normalize",
    "quat_to_heading",
    "reconstruct_heading",
    "rmse",
    "split_train_val",
    "__version__",
]
