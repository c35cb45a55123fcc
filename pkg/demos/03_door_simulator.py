"""The door-swing simulator: smooth profiles, IMU error injection, corpora.

Run me:  python3 demos/03_door_simulator.py
Writes:  demos/out/corpus_demo/ (a small corpus) and a heading plot.
"""
import math
from pathlib import Path

import numpy as np

from doorimu.plots import save_heading_overlay
from doorimu.quat import integrate_gyro
from doorimu.simulate import (CorpusConfig, DoorScenario, OpeningEvent,
                              SensorErrorModel, angle_profile, generate,
                              generate_corpus)

out_dir = Path(__file__).parent / "out"
out_dir.mkdir(exist_ok=True)

# Minimum-jerk opening: starts and ends at rest, peak angle held exactly.
event = OpeningEvent(start=2.0, peak_deg=75.0, open_duration=1.8,
                     hold_duration=3.0, close_duration=2.2)
marks = np.array([1.0, 2.9, 4.5, 9.5])
angles, rates, _ = angle_profile([event], marks)
for mark, angle, rate in zip(marks, angles, rates):
    print(f"t={mark:.1f}s angle {angle:7.3f} deg  rate {rate:+8.3f} deg/s")

# One noisy session: gyro picks up the scripted bias, accel sees gravity
# plus the swing's tangential/centripetal terms at the lever arm.
scenario = DoorScenario(lever_arm=0.75, events=[event],
                        sample_rate=120.0, duration=12.0)
bias = math.radians(40.0 / 3600.0)  # 40 deg/h on z
errors = SensorErrorModel(gyro_bias=(0.0, 0.0, bias),
                          gyro_noise_density=math.radians(0.007), seed=3)
t, gyro, accel, gt = generate(scenario, errors)
still = t < 1.5
print(f"still gyro z mean {np.degrees(np.mean(gyro[still, 2])) * 3600:+.1f} deg/h "
      f"(scripted bias +40)")
print(f"still accel mean  {np.round(np.mean(accel[still], axis=0), 3)} m/s^2")

est = integrate_gyro(t, gyro)
save_heading_overlay(out_dir / "simulated_swing.svg", gt,
                     {"gyro integration": est}, title="one simulated swing")
print(f"plot: {out_dir / 'simulated_swing.svg'}")

# A corpus is just many randomized sessions plus a manifest.
cfg = CorpusConfig(n_sessions=3, session_duration=30.0,
                   val_sessions=1, test_sessions=1, seed=1)
manifest = generate_corpus(cfg, out_dir / "corpus_demo")
print(f"corpus manifest: {manifest}")
