"""Ingestion and preprocessing checks, several against brute-force oracles."""

import numpy as np
import pytest

from doorimu.pipeline import (
    IMU_SCHEMA,
    CsvSchema,
    PreprocessedSession,
    RecordingSession,
    WindowSample,
    calibrate_gyro,
    detect_shut_periods,
    enforce_zero_drift,
    estimate_gyro_bias,
    load_csv,
    load_gt_csv,
    load_manifest,
    load_manifest_session,
    load_session,
    make_windows,
    preprocess_session,
    reconstruct_heading,
    split_experiments,
    split_train_val,
    window_matrices,
)
from doorimu.quat import HeadingSeries
from doorimu.simulate import CorpusConfig, generate_corpus


def write_imu_csv(path, rows, header="t,fx,fy,fz,wx,wy,wz"):
    path.write_text(header + "\n" + "\n".join(",".join(map(str, r)) for r in rows) + "\n")


def simple_rows(n=5, dt=0.1):
    return [[k * dt, 0.0, 0.0, 9.81, 0.1 * k, 0.0, 1.0] for k in range(n)]


def make_session(t, gyro=None, accel=None, gt=None, rate=None):
    t = np.asarray(t, dtype=float)
    n = t.size
    if gyro is None:
        gyro = np.zeros((n, 3))
    if accel is None:
        accel = np.tile([0.0, 0.0, 9.81], (n, 1))
    if rate is None:
        rate = 1.0 / float(np.median(np.diff(t)))
    return RecordingSession("test", rate, t, accel, gyro, gt=gt)


# ---------------------------------------------------------------- loading


def test_load_csv_well_formed(tmp_path):
    p = tmp_path / "a.csv"
    write_imu_csv(p, simple_rows(3))
    s = load_csv(p)
    assert len(s) == 3
    assert s.imu_id == "a"
    assert s.rate_hz == pytest.approx(10.0)
    np.testing.assert_allclose(s.accel[:, 2], 9.81)
    # file rates are deg/s; in memory rad/s
    np.testing.assert_allclose(s.gyro[:, 2], np.radians(1.0))


def test_load_csv_sorts_shuffled_timestamps(tmp_path):
    rows = simple_rows(6)
    shuffled = [rows[i] for i in (3, 0, 5, 1, 4, 2)]
    p = tmp_path / "b.csv"
    write_imu_csv(p, shuffled)
    s = load_csv(p)
    assert np.all(np.diff(s.t) > 0)
    np.testing.assert_allclose(s.gyro[:, 0], np.radians(0.1 * np.arange(6)))


def test_load_csv_drops_duplicate_timestamps(tmp_path):
    rows = simple_rows(4) + [[0.1, 9, 9, 9, 9, 9, 9]]  # duplicate t=0.1
    p = tmp_path / "c.csv"
    write_imu_csv(p, rows)
    s = load_csv(p)
    assert len(s) == 4
    # first occurrence in time order wins
    np.testing.assert_allclose(s.accel[1], [0.0, 0.0, 9.81])


def test_load_csv_missing_column_names_it(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("t,fx,fy,fz,wx,wy\n0,0,0,9.8,0,0\n")
    with pytest.raises(ValueError, match="wz"):
        load_csv(p)


def test_load_csv_reports_bad_line_number(tmp_path):
    p = tmp_path / "e.csv"
    p.write_text("t,fx,fy,fz,wx,wy,wz\n0,0,0,9.8,0,0,0\nnope,0,0,9.8,0,0,0\n")
    with pytest.raises(ValueError, match="line 3"):
        load_csv(p)


def test_load_csv_empty_and_header_only_files(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(ValueError, match="empty"):
        load_csv(empty)
    header_only = tmp_path / "h.csv"
    header_only.write_text("t,fx,fy,fz,wx,wy,wz\n")
    with pytest.raises(ValueError, match="no data rows"):
        load_csv(header_only)


def test_load_gt_csv_and_session_attachment(tmp_path):
    imu = tmp_path / "s.csv"
    write_imu_csv(imu, simple_rows(5))
    gt = tmp_path / "s_gt.csv"
    gt.write_text("t,heading_deg\n0.0,0.0\n0.2,2.0\n0.4,4.0\n")
    session = load_session(imu, gt)
    assert isinstance(session.gt, HeadingSeries)
    assert session.gt.at(0.1) == pytest.approx(1.0)


def test_custom_schema_column_order(tmp_path):
    p = tmp_path / "alt.csv"
    p.write_text("wx,wy,wz,t,fx,fy,fz\n1,2,3,0.0,0,0,9.8\n1,2,3,0.1,0,0,9.8\n")
    s = load_csv(p, CsvSchema())
    np.testing.assert_allclose(s.gyro[0], np.radians([1.0, 2.0, 3.0]))
    assert s.t[0] == 0.0


def test_session_validation_rejects_mismatched_shapes():
    with pytest.raises(ValueError, match="N, 3"):
        RecordingSession("x", 10.0, np.arange(4.0), np.zeros((4, 2)), np.zeros((4, 3)))
    with pytest.raises(ValueError, match="increasing"):
        RecordingSession("x", 10.0, np.array([0.0, 0.0, 1.0]),
                         np.zeros((3, 3)), np.zeros((3, 3)))
    with pytest.raises(ValueError, match="overlap"):
        make_session(np.arange(5.0), gt=HeadingSeries([10.0, 11.0], [0.0, 0.0]))


def test_session_samples_view():
    s = make_session(np.arange(3.0), gyro=np.arange(9.0).reshape(3, 3))
    samples = s.samples
    assert len(samples) == 3
    assert samples[1].t == 1.0
    np.testing.assert_array_equal(samples[2].w, [6.0, 7.0, 8.0])


# ---------------------------------------------------------------- calibration


def test_calibrate_gyro_removes_constant_bias():
    t = np.arange(100) * 0.01
    bias = np.array([1e-3, -2e-3, 5e-3])
    s = make_session(t, gyro=np.tile(bias, (100, 1)))
    out = calibrate_gyro(s, window=40)
    assert np.max(np.abs(out.gyro)) < 1e-12
    # input untouched
    np.testing.assert_array_equal(s.gyro[0], bias)


def test_calibrate_gyro_zero_bias_is_identity():
    rng = np.random.default_rng(0)
    t = np.arange(60) * 0.01
    gyro = np.zeros((60, 3))
    gyro[45:] = rng.normal(size=(15, 3))  # motion after the still window
    s = make_session(t, gyro=gyro)
    out = calibrate_gyro(s, window=40)
    np.testing.assert_allclose(out.gyro, gyro, atol=1e-15)


def test_calibrate_gyro_recovers_simulated_bias():
    from doorimu.simulate import DoorScenario, OpeningEvent, SensorErrorModel, generate

    scenario = DoorScenario(duration=20.0,
                            events=(OpeningEvent(6.0, 60.0, 2.0, 2.0, 2.0),))
    bias = np.array([1e-3, -2e-3, 5e-3])
    noise = 1e-4
    errors = SensorErrorModel(gyro_bias=tuple(bias), gyro_noise_density=noise,
                              accel_noise_density=1e-4, seed=7)
    t, gyro, accel, gt = generate(scenario, errors)
    s = RecordingSession("sim", 120.0, t, accel, gyro, gt=gt)
    est = estimate_gyro_bias(s, window=40)
    sigma = noise * np.sqrt(120.0) / np.sqrt(40)
    assert np.all(np.abs(est - bias) < 5 * sigma)


def test_calibrate_gyro_idempotent_on_stationary_start():
    rng = np.random.default_rng(3)
    t = np.arange(200) * 0.01
    gyro = 1e-2 + rng.normal(scale=1e-6, size=(200, 3))
    s = make_session(t, gyro=gyro)
    once = calibrate_gyro(s, window=40)
    twice = calibrate_gyro(once, window=40)
    assert np.max(np.abs(twice.gyro - once.gyro)) < 1e-6


def test_calibrate_gyro_session_shorter_than_window():
    s = make_session(np.arange(10.0))
    with pytest.raises(ValueError, match="shorter"):
        calibrate_gyro(s, window=40)


# ---------------------------------------------------------------- shut detection


def brute_force_still_intervals(t, gyro, threshold, min_duration):
    """Independent scan: walk every sample, cut maximal quiet runs."""
    out = []
    start = None
    for i in range(len(t)):
        quiet = float(np.linalg.norm(gyro[i])) < threshold
        if quiet and start is None:
            start = i
        if not quiet and start is not None:
            if t[i - 1] - t[start] >= min_duration:
                out.append((float(t[start]), float(t[i - 1])))
            start = None
    if start is not None and t[-1] - t[start] >= min_duration:
        out.append((float(t[start]), float(t[-1])))
    return out


def test_detect_shut_all_stationary():
    t = np.arange(0, 10, 0.1)
    s = make_session(t)
    assert detect_shut_periods(s, 0.05, 2.0) == [(0.0, pytest.approx(9.9))]


def test_detect_shut_continuous_motion():
    t = np.arange(0, 10, 0.1)
    gyro = np.tile([0.0, 0.0, 0.2], (t.size, 1))
    s = make_session(t, gyro=gyro)
    assert detect_shut_periods(s, 0.05, 2.0) == []


def test_detect_shut_pause_between_moves():
    dt = 1 / 120.0
    t = np.arange(0, 12, dt)
    gyro = np.zeros((t.size, 3))
    gyro[(t < 4.0), 2] = 0.3           # opening
    gyro[(t >= 7.0), 2] = -0.3         # closing; pause 4..7 quiet
    s = make_session(t, gyro=gyro)
    intervals = detect_shut_periods(s, 0.05, 2.0)
    assert len(intervals) == 1
    a, b = intervals[0]
    assert a == pytest.approx(4.0, abs=1.5 * dt)
    assert b == pytest.approx(7.0 - dt, abs=1.5 * dt)


@pytest.mark.parametrize("seed", range(6))
def test_detect_shut_matches_brute_force_scan(seed):
    rng = np.random.default_rng(200 + seed)
    n = 600
    t = np.arange(n) / 60.0
    # blocky random motion: alternating quiet and loud chunks
    gyro = np.zeros((n, 3))
    pos = 0
    while pos < n:
        length = int(rng.integers(20, 140))
        if rng.random() < 0.5:
            gyro[pos : pos + length] = rng.normal(scale=0.3, size=(min(length, n - pos), 3))
        pos += length
    s = make_session(t, gyro=gyro)
    got = detect_shut_periods(s, 0.05, 1.0)
    expected = brute_force_still_intervals(t, gyro, 0.05, 1.0)
    assert got == expected


# ---------------------------------------------------------------- zero drift


def test_enforce_zero_drift_re_zeroes_final_shut_value():
    # linear sensor drift; door physically shut from t=8 on, reading 2.3 deg
    t = np.linspace(0.0, 10.0, 101)
    drift = 2.3 * t / 8.0
    series = HeadingSeries(t, drift)
    out = enforce_zero_drift(series, [(8.0, 10.0)])
    assert out.heading_deg[-1] == 0.0
    inside = (t >= 8.0) & (t <= 10.0)
    np.testing.assert_array_equal(out.heading_deg[inside], 0.0)
    # earlier values untouched
    np.testing.assert_array_equal(out.heading_deg[t < 8.0], drift[t < 8.0])


def test_enforce_zero_drift_no_intervals_is_identity():
    t = np.linspace(0, 5, 50)
    series = HeadingSeries(t, np.sin(t))
    out = enforce_zero_drift(series, [])
    np.testing.assert_array_equal(out.heading_deg, series.heading_deg)
    assert out is not series


def test_enforce_zero_drift_sawtooth():
    # drift 1 deg/s, shut during [2,3] and [6,7]: re-zeroed twice
    t = np.arange(0.0, 10.0 + 1e-9, 0.5)
    series = HeadingSeries(t, t.copy())
    out = enforce_zero_drift(series, [(2.0, 3.0), (6.0, 7.0)])
    h = out.heading_deg
    np.testing.assert_array_equal(h[(t >= 2.0) & (t <= 3.0)], 0.0)
    np.testing.assert_array_equal(h[(t >= 6.0) & (t <= 7.0)], 0.0)
    # between intervals the drift restarts from the first interval's offset
    np.testing.assert_allclose(h[t == 4.0], [2.0])  # 4 - 2
    np.testing.assert_allclose(h[t == 5.0], [3.0])
    # after the second re-zeroing: value at 6.0 was 4.0, subtracted onward
    np.testing.assert_allclose(h[t == 8.0], [2.0])  # 8 - 2 - 4
    np.testing.assert_allclose(h[t == 10.0], [4.0])


def test_enforce_zero_drift_rejects_overlapping_intervals():
    t = np.linspace(0, 10, 100)
    series = HeadingSeries(t, t)
    with pytest.raises(ValueError, match="[Oo]verlap"):
        enforce_zero_drift(series, [(1.0, 4.0), (3.0, 6.0)])
    with pytest.raises(ValueError, match="span"):
        enforce_zero_drift(series, [(8.0, 12.0)])
    with pytest.raises(ValueError, match="interval"):
        enforce_zero_drift(series, [(4.0, 4.0)])


# ---------------------------------------------------------------- windowing


def ramp_session(n=2400, rate=120.0):
    t = np.arange(n) / rate
    gt = HeadingSeries(t, np.arange(n, dtype=float))  # 1 deg per sample
    return make_session(t, gt=gt, rate=rate)


def test_make_windows_count_on_2400_samples():
    windows = make_windows(ramp_session(), window_len=20, stride=20)
    assert len(windows) == 120


def test_make_windows_constant_gt_gives_zero_targets():
    s = ramp_session(200)
    flat = HeadingSeries(s.t, np.full(200, 7.5))
    windows = make_windows(s, flat)
    assert all(w.target == 0.0 for w in windows)


def test_make_windows_ramp_target_is_first_to_last_difference():
    windows = make_windows(ramp_session(200), window_len=20, stride=20)
    # 1 deg per sample, first-to-last inside a 20-sample window = 19 deg
    assert all(w.target == pytest.approx(19.0, abs=1e-9) for w in windows)


def test_make_windows_interpolates_faster_reference_clock():
    rate = 120.0
    n = 240
    t = np.arange(n) / rate
    gt_t = np.arange(0.0, t[-1] + 1 / 250.0, 1 / 250.0)  # faster reference clock
    gt = HeadingSeries(gt_t, 10.0 * gt_t)
    s = make_session(t, gt=gt, rate=rate)
    windows = make_windows(s, window_len=20, stride=20)
    for w in windows:
        assert w.target == pytest.approx(10.0 * (w.t_end - w.t_start), abs=1e-9)


def test_make_windows_rejects_reference_gaps():
    s = ramp_session(400)
    sparse = HeadingSeries([s.t[0], s.t[-1]], [0.0, 10.0])  # 3.3 s gap
    with pytest.raises(ValueError, match="gap"):
        make_windows(s, sparse)


def test_make_windows_rejects_uncovered_span():
    s = ramp_session(240)
    t_short = s.t[s.t <= 1.0]
    short = HeadingSeries(t_short, np.zeros(t_short.size))
    with pytest.raises(ValueError, match="cover"):
        make_windows(s, short)


def test_make_windows_stride_and_shapes():
    windows = make_windows(ramp_session(100), window_len=20, stride=10)
    assert len(windows) == 9  # starts 0,10,...,80
    w = windows[0]
    assert w.gyro_window.shape == (20, 3)
    assert w.accel_window.shape == (20, 3)
    assert isinstance(w, WindowSample)


def test_window_matrices_stacks():
    windows = make_windows(ramp_session(100), window_len=20, stride=20)
    gyro, accel, targets, t_end = window_matrices(windows)
    assert gyro.shape == (5, 20, 3)
    assert accel.shape == (5, 20, 3)
    assert targets.shape == t_end.shape == (5,)
    with pytest.raises(ValueError):
        window_matrices([])


# ---------------------------------------------------------------- reconstruction


def test_reconstruct_heading_cumulative_sum():
    out = reconstruct_heading([1.0, 2.0, 3.0])
    np.testing.assert_array_equal(out.heading_deg, [1.0, 3.0, 6.0])
    np.testing.assert_array_equal(out.t, [1.0, 2.0, 3.0])


def test_reconstruct_heading_zeros_hold_initial_value():
    out = reconstruct_heading(np.zeros(5), psi0=42.0)
    np.testing.assert_array_equal(out.heading_deg, np.full(5, 42.0))


def test_windows_then_reconstruction_recovers_ramp_exactly():
    # boundary-sharing windows (stride = window_len - 1) tile the series, so
    # the first-to-last targets telescope and the cumulative sum lands back
    # on the reference at every window end
    s = ramp_session(400)
    windows = make_windows(s, window_len=20, stride=19)
    targets = np.array([w.target for w in windows])
    t_end = np.array([w.t_end for w in windows])
    psi0 = float(s.gt.at(windows[0].t_start))
    rebuilt = reconstruct_heading(targets, psi0=psi0, t=t_end)
    expected = s.gt.at(t_end)
    np.testing.assert_allclose(rebuilt.heading_deg, expected, atol=1e-9)


def test_non_overlapping_windows_miss_exactly_the_seam_increments():
    # at stride = window_len the heading change across each between-window
    # seam (one sample step) is in no window's target, so the reconstruction
    # undershoots the ramp by exactly k degrees after k seams; estimator
    # comparisons stay fair because every estimator is windowed the same way
    s = ramp_session(400)
    windows = make_windows(s, window_len=20, stride=20)
    targets = np.array([w.target for w in windows])
    rebuilt = reconstruct_heading(targets, psi0=0.0)
    expected_gt = s.gt.at([w.t_end for w in windows])
    deficit = expected_gt - rebuilt.heading_deg
    np.testing.assert_allclose(deficit, np.arange(len(windows), dtype=float),
                               atol=1e-9)


def test_reconstruct_heading_validation():
    with pytest.raises(ValueError):
        reconstruct_heading(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        reconstruct_heading([1.0, 2.0], t=[1.0])


# ---------------------------------------------------------------- splitting


def fake_windows_by_experiment(n_exp, per=4):
    return {
        f"exp{i:02d}": [
            WindowSample(np.zeros((20, 3)), np.zeros((20, 3)), float(i), 0.0, 1.0)
        ] * per
        for i in range(n_exp)
    }


def test_split_ten_experiments_80_20():
    groups = fake_windows_by_experiment(10)
    train, val = split_train_val(groups, 0.2, seed=1)
    train_ids = {w.target for w in train}
    val_ids = {w.target for w in val}
    assert len(val_ids) == 2
    assert len(train_ids) == 8
    assert train_ids.isdisjoint(val_ids)
    assert len(train) == 32 and len(val) == 8


def test_split_same_seed_identical_different_seed_differs():
    ids = [f"e{i}" for i in range(12)]
    a = split_experiments(ids, 0.25, seed=9)
    b = split_experiments(ids, 0.25, seed=9)
    assert a == b
    outcomes = {tuple(split_experiments(ids, 0.25, seed=s)[1]) for s in range(8)}
    assert len(outcomes) > 1


def test_split_fraction_honored_within_one_experiment():
    for n in (3, 5, 7, 10, 13):
        for frac in (0.15, 0.2, 0.33, 0.5):
            _, val_ids = split_experiments([f"e{i}" for i in range(n)], frac, seed=0)
            assert abs(len(val_ids) - frac * n) <= 1.0


def test_split_keeps_experiments_whole():
    groups = fake_windows_by_experiment(6, per=3)
    train, val = split_train_val(groups, 0.34, seed=4)
    for side in (train, val):
        ids = [w.target for w in side]
        for i in set(ids):
            assert ids.count(i) == 3


def test_split_validation():
    with pytest.raises(ValueError, match="2 experiments"):
        split_experiments(["only"], 0.5, seed=0)
    with pytest.raises(ValueError, match="val_fraction"):
        split_experiments(["a", "b"], 1.0, seed=0)


# ---------------------------------------------------------------- preprocessing


def test_preprocess_session_full_chain():
    # still 0-5 s (shut), open to 90 deg by 8 s, held open 8-14 s (still but
    # NOT shut), closed by 17 s, still 17-24 s (shut); constant gyro bias
    dt = 1 / 120.0
    t = np.arange(0.0, 24.0, dt)
    rate_z = np.zeros(t.size)
    opening = (t >= 5.0) & (t < 8.0)
    closing = (t >= 14.0) & (t < 17.0)
    rate_z[opening] = 30.0  # deg/s
    rate_z[closing] = -30.0
    heading = np.cumsum(rate_z) * dt
    heading -= heading[0]
    bias = np.array([2e-3, -1e-3, 3e-3])
    gyro = np.radians(np.stack([np.zeros_like(rate_z)] * 2 + [rate_z], axis=1)) + bias
    gt = HeadingSeries(t.copy(), heading + 0.1 * t)  # slow reference drift
    session = make_session(t, gyro=gyro, gt=gt, rate=120.0)

    out = preprocess_session(session, calibration_window=40)
    assert isinstance(out, PreprocessedSession)
    np.testing.assert_allclose(out.gyro_bias, bias, atol=1e-12)
    # stillness detector sees shut spans AND the held-open span
    assert len(out.still_intervals) == 3
    # the heading filter drops the held-open one (|gt| ~ 90 there)
    assert len(out.shut_intervals) == 2
    for a, b in out.shut_intervals:
        inside = (out.session.gt.t >= a) & (out.session.gt.t <= b)
        np.testing.assert_array_equal(out.session.gt.heading_deg[inside], 0.0)
    # calibrated rates are bias-free
    assert np.max(np.abs(out.session.gyro[t < 5.0])) < 1e-12


def test_preprocess_session_requires_reference():
    s = make_session(np.arange(0, 50, 0.1))
    with pytest.raises(ValueError, match="reference"):
        preprocess_session(s)


# ---------------------------------------------------------------- manifest


@pytest.fixture(scope="module")
def tiny_corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    cfg = CorpusConfig(n_sessions=4, session_duration=40.0,
                       openings_per_session=(2, 3), val_sessions=1,
                       test_sessions=1, seed=77)
    return generate_corpus(cfg, out)


def test_load_manifest_round_trip(tiny_corpus):
    manifest = load_manifest(tiny_corpus)
    assert manifest["kind"] == "doorimu-corpus"
    assert len(manifest["sessions"]) == 4
    roles = [s["role"] for s in manifest["sessions"]]
    assert roles.count("val") == 1 and roles.count("test") == 1


def test_load_manifest_session_loads_csvs(tiny_corpus):
    manifest = load_manifest(tiny_corpus)
    entry = manifest["sessions"][0]
    session = load_manifest_session(tiny_corpus, entry)
    assert session.imu_id == entry["name"]
    assert session.gt is not None
    assert session.rate_hz == pytest.approx(120.0, rel=1e-6)
    assert len(session) == 40 * 120


def test_load_manifest_validation(tmp_path):
    p = tmp_path / "m.json"
    p.write_text("not json")
    with pytest.raises(ValueError, match="JSON"):
        load_manifest(p)
    p.write_text('{"kind": "other", "schema_version": 1, "sessions": [{}]}')
    with pytest.raises(ValueError, match="kind"):
        load_manifest(p)
    p.write_text('{"kind": "doorimu-corpus", "schema_version": 2, "sessions": [{}]}')
    with pytest.raises(ValueError, match="schema_version"):
        load_manifest(p)
    p.write_text('{"kind": "doorimu-corpus", "schema_version": 1, "sessions": []}')
    with pytest.raises(ValueError, match="sessions"):
        load_manifest(p)
    entry = '{"name": "s", "imu": "s.csv", "gt": "g.csv", "role": "weird", "calibration_window": 40}'
    p.write_text('{"kind": "doorimu-corpus", "schema_version": 1, "sessions": [%s]}' % entry)
    with pytest.raises(ValueError, match="role"):
        load_manifest(p)
    entry = '{"name": "s", "imu": "s.csv", "gt": "g.csv", "role": "train"}'
    p.write_text('{"kind": "doorimu-corpus", "schema_version": 1, "sessions": [%s]}' % entry)
    with pytest.raises(ValueError, match="calibration_window"):
        load_manifest(p)


def test_preprocess_simulated_corpus_session(tiny_corpus):
    from doorimu.simulate import DEFAULT_GYRO_NOISE

    manifest = load_manifest(tiny_corpus)
    entry = manifest["sessions"][0]
    session = load_manifest_session(tiny_corpus, entry)
    out = preprocess_session(session, entry["calibration_window"])
    true_bias = np.asarray(entry["gyro_bias_deg_h"]) * (np.pi / 180.0 / 3600.0)
    # a 40-sample mean of noise with density d at rate fs has spread
    # d * sqrt(fs) / sqrt(40); the estimator is noise-limited, not biased
    sigma = DEFAULT_GYRO_NOISE * np.sqrt(entry["sample_rate"]) / np.sqrt(40)
    assert np.all(np.abs(out.gyro_bias - true_bias) < 4 * sigma)
    windows = make_windows(out.session)
    assert len(windows) == len(session) // 20
