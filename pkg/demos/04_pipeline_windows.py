"""Data conditioning: CSV ingestion, calibration, stillness, windows.

Run me:  python3 demos/04_pipeline_windows.py
"""
import tempfile
from pathlib import Path

import numpy as np

from doorimu.pipeline import (load_manifest, load_manifest_session,
                              make_windows, preprocess_session,
                              reconstruct_heading, window_matrices)
from doorimu.simulate import CorpusConfig, generate_corpus

# Build a small corpus on disk, then walk it back in through the loaders.
work = Path(tempfile.mkdtemp(prefix="doorimu_demo_"))
cfg = CorpusConfig(n_sessions=3, session_duration=40.0,
                   val_sessions=1, test_sessions=1, seed=4)
manifest_path = generate_corpus(cfg, work)
manifest = load_manifest(manifest_path)
entry = next(e for e in manifest["sessions"] if e["role"] == "train")
session = load_manifest_session(manifest_path, entry)
print(f"{entry['name']}: {len(session)} samples at {session.rate_hz:.1f} Hz, "
      f"scripted z bias {entry['gyro_bias_deg_h'][2]:+.1f} deg/h")

# The conditioning chain: remove the startup bias estimate, find the spans
# where the door sits still, and pin the reference to zero on the closed ones.
pre = preprocess_session(session)
bias_deg_h = np.degrees(pre.gyro_bias) * 3600.0
print(f"estimated bias {np.round(bias_deg_h, 1)} deg/h; "
      f"{len(pre.still_intervals)} still spans, "
      f"{len(pre.shut_intervals)} of them closed-door")
a, b = pre.shut_intervals[0]
pinned = pre.session.gt.at(np.linspace(a, b, 5))
print(f"reference during first closed span: {np.round(pinned, 6)} deg")

# Windows pair 20-sample IMU snippets with the exact heading change across
# them; stride = window length - 1 makes consecutive windows share a
# boundary sample, so the increments add back to the heading exactly.
windows = make_windows(pre.session, window_len=20, stride=19)
gyro, accel, targets, t_end = window_matrices(windows)
print(f"{len(windows)} windows, gyro {gyro.shape}, "
      f"|target| max {np.abs(targets).max():.3f} deg")

rebuilt = reconstruct_heading(targets, psi0=float(pre.session.gt.at(windows[0].t_start)),
                              t=t_end)
truth = pre.session.gt.at(t_end)
print(f"rebuilt-from-increments vs reference: "
      f"max gap {np.abs(rebuilt.heading_deg - truth).max():.2e} deg")
