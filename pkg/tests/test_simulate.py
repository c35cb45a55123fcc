import json
import math

import numpy as np
import pytest

from doorimu.quat import integrate_gyro
from doorimu.simulate import (
    DEG_PER_HOUR,
    GRAVITY,
    CorpusConfig,
    DoorScenario,
    OpeningEvent,
    SensorErrorModel,
    angle_profile,
    generate,
    generate_corpus,
)


def one_swing(peak=90.0, start=5.0, open_s=2.0, hold=3.0, close_s=2.0):
    return DoorScenario(
        duration=20.0,
        sample_rate=120.0,
        events=(OpeningEvent(start, peak, open_s, hold, close_s),),
    )


def test_profile_metadata_validation():
    with pytest.raises(ValueError):
        OpeningEvent(0.0, 200.0, 2.0, 2.0, 2.0)
    with pytest.raises(ValueError):
        OpeningEvent(0.0, 90.0, 0.0, 2.0, 2.0)
    with pytest.raises(ValueError):
        DoorScenario(events=(OpeningEvent(0.0, 90.0, 2.0, 2.0, 2.0), OpeningEvent(3.0, 45.0, 1.0, 1.0, 1.0)))
    with pytest.raises(ValueError):
        DoorScenario(duration=5.0, events=(OpeningEvent(0.0, 90.0, 2.0, 2.0, 2.0),))


def test_profile_derivatives_match_finite_differences():
    # the stated rate/acceleration must be the true derivatives of the angle
    ev = (OpeningEvent(1.0, 75.0, 1.7, 2.5, 2.3),)
    t = np.arange(0.0, 9.0, 1e-3)
    angle, rate, acc = angle_profile(ev, t)
    fd_rate = np.gradient(angle, t)
    fd_acc = np.gradient(rate, t)
    # central differences are only O(dt) accurate where the third derivative
    # jumps, so keep clear of the four segment joints by two samples
    keep = np.ones(t.size, bool)
    keep[:2] = keep[-2:] = False
    for joint in (1.0, 2.7, 5.2, 7.5):
        keep &= np.abs(t - joint) > 2.5e-3
    assert np.max(np.abs(fd_rate[keep] - rate[keep])) < 1e-2   # deg/s
    assert np.max(np.abs(fd_acc[keep] - acc[keep])) < 1e-2     # deg/s^2


def test_profile_is_c2_at_segment_joints():
    ev = OpeningEvent(1.0, 60.0, 2.0, 1.5, 2.0)
    eps = 1e-9
    for joint in (1.0, 3.0, 4.5, 6.5):
        a = np.array([joint - eps, joint + eps])
        angle, rate, acc = angle_profile((ev,), a)
        assert abs(angle[1] - angle[0]) < 1e-6
        assert abs(rate[1] - rate[0]) < 1e-5
        assert abs(acc[1] - acc[0]) < 1e-4


def test_heading_returns_exactly_to_zero_after_close():
    t, gyro, accel, gt = generate(one_swing())
    after = gt.t >= 12.0  # event ends at 5 + 2 + 3 + 2 = 12
    assert np.all(gt.heading_deg[after] == 0.0)
    hold = (gt.t >= 7.0 + 1e-9) & (gt.t < 10.0)
    assert np.all(gt.heading_deg[hold] == 90.0)


def test_static_specific_force_is_pure_gravity():
    t, gyro, accel, gt = generate(one_swing())
    still = (t < 5.0) | (t >= 12.0)
    assert np.allclose(accel[still], [0.0, 0.0, GRAVITY], atol=0.0)
    assert np.all(gyro[still] == 0.0)


def test_swing_kinematics_signs():
    # opening: positive tangential acceleration first, centripetal always inward
    t, gyro, accel, gt = generate(one_swing())
    opening = (t >= 5.0) & (t < 7.0)
    assert np.all(accel[opening][1:, 0] <= 0.0)  # -r * rate^2
    first_half = (t >= 5.0) & (t < 6.0)
    assert np.all(accel[first_half][1:, 1] > 0.0)  # r * acc, speeding up
    assert gyro[opening][:, 2].max() > math.radians(50.0)  # 90 deg in 2 s peaks > 50 deg/s


def test_gyro_integration_recovers_ground_truth():
    t, gyro, accel, gt = generate(one_swing())
    est = integrate_gyro(t, gyro, axis="z")
    rmse = math.sqrt(np.mean((est.heading_deg - gt.heading_deg) ** 2))
    assert rmse < 0.01


def test_stationary_bias_drift_matches_closed_form():
    # 10 deg/h about z for 90 min integrates to 15 deg of heading drift
    scenario = DoorScenario(duration=5400.0, sample_rate=120.0, events=())
    errors = SensorErrorModel(
        gyro_bias=(0.0, 0.0, 10.0 * DEG_PER_HOUR),
        gyro_noise_density=1e-5,
        seed=99,
    )
    t, gyro, accel, gt = generate(scenario, errors)
    est = integrate_gyro(t, gyro, axis="z")
    assert est.heading_deg[-1] == pytest.approx(15.0, abs=0.5)
    assert np.all(gt.heading_deg == 0.0)


def test_same_seed_reproduces_bitwise():
    scenario = one_swing()
    errors = SensorErrorModel(
        gyro_bias=(1e-4, -2e-4, 3e-4),
        gyro_noise_density=1e-4,
        accel_noise_density=1e-3,
        seed=1234,
    )
    a = generate(scenario, errors)
    b = generate(scenario, errors)
    for x, y in zip(a[:3], b[:3]):
        assert np.array_equal(x, y)


def test_corpus_is_byte_identical_and_role_partitioned(tmp_path):
    cfg = CorpusConfig(n_sessions=4, session_duration=40.0, val_sessions=1, test_sessions=1, seed=5)
    m1 = generate_corpus(cfg, tmp_path / "a")
    m2 = generate_corpus(cfg, tmp_path / "b")
    man1 = json.loads(m1.read_text())
    files1 = sorted(p.name for p in (tmp_path / "a").iterdir())
    files2 = sorted(p.name for p in (tmp_path / "b").iterdir())
    assert files1 == files2
    for name in files1:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    roles = [s["role"] for s in man1["sessions"]]
    assert roles.count("val") == 1 and roles.count("test") == 1 and roles.count("train") == 2
    # biases land inside the configured band
    for s in man1["sessions"]:
        for b in s["gyro_bias_deg_h"]:
            assert 25.0 <= abs(b) <= 50.0


def test_corpus_header_and_units(tmp_path):
    cfg = CorpusConfig(n_sessions=3, session_duration=30.0, val_sessions=1, test_sessions=1, seed=2)
    manifest = generate_corpus(cfg, tmp_path)
    man = json.loads(manifest.read_text())
    imu = tmp_path / man["sessions"][0]["imu"]
    header = imu.read_text().splitlines()[0]
    assert header == "t,fx,fy,fz,wx,wy,wz"
    data = np.loadtxt(imu, delimiter=",", skiprows=1)
    # file gyro columns are deg/s: bias ~tens of deg/h plus noise, so well under 5 deg/s at rest
    assert np.median(np.abs(data[:, 6])) < 5.0
    # accel z sits near gravity in m/s^2
    assert abs(np.median(data[:, 3]) - GRAVITY) < 0.5
