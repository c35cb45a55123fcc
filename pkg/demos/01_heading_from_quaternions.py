"""Attitude basics: quaternions, yaw extraction, and rate integration.

Run me:  python3 demos/01_heading_from_quaternions.py
"""
import math

import numpy as np

from doorimu.quat import (Quaternion, heading_wrap, integrate_gyro,
                          quat_multiply, quat_rotate, quat_to_heading)

# A quaternion built from a pure yaw rotation should hand the angle back.
yaw = math.radians(40.0)
q_yaw = Quaternion(math.cos(yaw / 2), 0.0, 0.0, math.sin(yaw / 2))
print(f"40 deg yaw quaternion -> heading {quat_to_heading(q_yaw):+.3f} deg")

# Composition: two 40 deg yaws -> 80 deg.
q2 = quat_multiply(q_yaw, q_yaw)
print(f"composed twice        -> heading {quat_to_heading(q2):+.3f} deg")

# Rotating gravity by a yaw leaves it untouched; a 90 deg roll does not.
g = np.array([0.0, 0.0, 9.80665])
roll = Quaternion(math.cos(math.pi / 4), math.sin(math.pi / 4), 0.0, 0.0)
print(f"gravity after yaw  : {np.round(quat_rotate(q_yaw, g), 6)}")
print(f"gravity after roll : {np.round(quat_rotate(roll, g), 6)}")

# Headings live on (-180, 180]; wrapping is explicit, never hidden.
print(f"wrap(190)  = {heading_wrap(190.0):+.1f} deg")
print(f"wrap(-270) = {heading_wrap(-270.0):+.1f} deg")

# Integrating a z-axis rate profile recovers the turn it encodes: one
# second at 30 deg/s, a pause, then back at -15 deg/s for two seconds.
fs = 120.0
t = np.arange(0, 6.0, 1.0 / fs)
rate = np.zeros_like(t)
rate[(t >= 1.0) & (t < 2.0)] = math.radians(30.0)
rate[(t >= 3.0) & (t < 5.0)] = math.radians(-15.0)
series = integrate_gyro(t, rate)
for mark in (0.5, 2.5, 5.5):
    print(f"t={mark:.1f}s heading {float(series.at(mark)):+7.3f} deg")
print("net turn should be ~0: "
      f"{float(series.heading_deg[-1]):+.3f} deg")
