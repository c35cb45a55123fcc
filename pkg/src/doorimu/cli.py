"""Command-line front end: simulate -> preprocess -> train -> eval -> compare.

Every subcommand is deterministic given its config and seed.  Config files
are JSON objects validated against the command's known keys; command-line
flags override file values.  The DOORIMU_DATA_DIR environment variable sets
the default data directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import fields as dataclass_fields
from pathlib import Path

import numpy as np

from .madgwick import MadgwickConfig, run as madgwick_run, run_thresholded
from .metrics import (MetricsReport, evaluate, format_table,
                      increments_on_common_base, load_report, rmse,
                      save_report)
from .nn import (BUILDERS, TrainConfig, load_checkpoint, param_count,
                 predict, resume_optimizer, save_checkpoint, train,
                 train_config_dict)
from .pipeline import (calibrate_gyro, load_manifest, load_manifest_session,
                       make_windows, preprocess_session, reconstruct_heading,
                       window_matrices)
from .plots import save_heading_overlay, save_loss_curves
from .quat import HeadingSeries, integrate_gyro
from .simulate import CorpusConfig, generate_corpus

DATA_DIR_ENV = "DOORIMU_DATA_DIR"

WINDOWS_KIND = "doorimu-windows"
TABLE_KIND = "doorimu-report-table"

FILTER_ESTIMATORS = ("integration", "madgwick", "madgwick_thresholded")


class CliError(Exception):
    """User-facing problem; printed without a traceback, exit status 2."""


# ---------------------------------------------------------------------------
# config plumbing


def _default_data_dir() -> Path:
    return Path(os.environ.get(DATA_DIR_ENV, "data"))


def _read_config_file(path) -> dict:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise CliError(f"config file not found: {path}") from None
    except json.JSONDecodeError as err:
        raise CliError(f"{path}: not valid JSON ({err})") from None
    if not isinstance(data, dict):
        raise CliError(f"{path}: config must be a JSON object")
    return data


def _merge_config(defaults: dict, args, overrides: dict, command: str) -> dict:
    """defaults <- config file <- explicit flag overrides, rejecting unknown
    file keys so typos fail loudly instead of silently using a default."""
    merged = dict(defaults)
    if getattr(args, "config", None):
        file_cfg = _read_config_file(args.config)
        unknown = sorted(set(file_cfg) - set(defaults))
        if unknown:
            raise CliError(
                f"{args.config}: unknown config key(s) for {command}: "
                f"{', '.join(unknown)} (valid: {', '.join(sorted(defaults))})"
            )
        merged.update(file_cfg)
    for key, value in overrides.items():
        if value is not None:
            merged[key] = value
    return merged


def _tuplify(value):
    if isinstance(value, list):
        return tuple(_tuplify(v) for v in value)
    return value


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _resolve_manifest(args) -> Path:
    base = Path(args.data_dir) if args.data_dir else _default_data_dir()
    path = base if base.is_file() else base / "manifest.json"
    if not path.is_file():
        raise CliError(
            f"manifest not found: {path} (run 'doorimu simulate' first, or "
            f"point --data-dir / {DATA_DIR_ENV} at a corpus)"
        )
    return path


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args) -> int:
    defaults = {f.name: getattr(CorpusConfig(), f.name)
                for f in dataclass_fields(CorpusConfig)}
    merged = _merge_config(defaults, args, {"seed": args.seed}, "simulate")
    merged = {k: _tuplify(v) for k, v in merged.items()}
    try:
        cfg = CorpusConfig(**merged)
    except (TypeError, ValueError) as err:
        raise CliError(f"simulate config: {err}") from None
    out_dir = Path(args.out_dir) if args.out_dir else _default_data_dir()
    manifest_path = generate_corpus(cfg, out_dir)
    manifest = load_manifest(manifest_path)
    roles = {}
    for entry in manifest["sessions"]:
        roles[entry["role"]] = roles.get(entry["role"], 0) + 1
    role_txt = ", ".join(f"{roles[r]} {r}" for r in ("train", "val", "test") if r in roles)
    print(f"wrote {len(manifest['sessions'])} sessions ({role_txt}) at seed {cfg.seed}")
    print(f"manifest: {manifest_path}")
    return 0


# ---------------------------------------------------------------------------
# preprocess


PREPROCESS_DEFAULTS = {
    "window_len": 20,
    "stride": 20,
    "calibration_window": None,  # None: use each manifest entry's value
    "shut_threshold": 0.05,
    "min_shut_duration": 2.0,
    "max_shut_heading_deg": 5.0,
}


def cmd_preprocess(args) -> int:
    manifest_path = _resolve_manifest(args)
    manifest = load_manifest(manifest_path)
    cfg = _merge_config(
        PREPROCESS_DEFAULTS, args,
        {"window_len": args.window_len, "stride": args.stride}, "preprocess",
    )
    out_dir = Path(args.out_dir) if args.out_dir else manifest_path.parent / "windows"
    out_dir.mkdir(parents=True, exist_ok=True)

    buckets = {"train": [], "val": []}
    sessions_meta = []
    test_names = []
    for entry in manifest["sessions"]:
        name, role = entry["name"], entry["role"]
        if role == "test":
            test_names.append(name)
            continue
        session = load_manifest_session(manifest_path, entry)
        calwin = cfg["calibration_window"] or entry["calibration_window"]
        pre = preprocess_session(
            session,
            calibration_window=calwin,
            shut_threshold=cfg["shut_threshold"],
            min_shut_duration=cfg["min_shut_duration"],
            max_shut_heading_deg=cfg["max_shut_heading_deg"],
        )
        windows = make_windows(pre.session, window_len=cfg["window_len"],
                               stride=cfg["stride"])
        if not windows:
            raise CliError(f"{name}: session shorter than one window")
        buckets[role].append(window_matrices(windows))
        bias_deg_h = [float(b) for b in np.degrees(pre.gyro_bias) * 3600.0]
        sessions_meta.append({
            "name": name,
            "role": role,
            "n_windows": len(windows),
            "gyro_bias_deg_h": bias_deg_h,
            "n_still_intervals": len(pre.still_intervals),
            "n_shut_intervals": len(pre.shut_intervals),
        })
        print(f"{name}: role={role} windows={len(windows)} "
              f"bias z={bias_deg_h[2]:+.1f} deg/h shut={len(pre.shut_intervals)}")

    counts = {}
    for role, mats in buckets.items():
        if not mats:
            raise CliError(f"manifest has no {role!r} sessions; nothing to train on")
        gyro = np.concatenate([m[0] for m in mats])
        accel = np.concatenate([m[1] for m in mats])
        targets = np.concatenate([m[2] for m in mats])
        t_end = np.concatenate([m[3] for m in mats])
        np.save(out_dir / f"{role}_gyro.npy", gyro)
        np.save(out_dir / f"{role}_accel.npy", accel)
        np.save(out_dir / f"{role}_targets.npy", targets)
        np.save(out_dir / f"{role}_t_end.npy", t_end)
        counts[role] = int(targets.size)

    _write_json(out_dir / "windows.json", {
        "kind": WINDOWS_KIND,
        "schema_version": 1,
        "window_len": cfg["window_len"],
        "stride": cfg["stride"],
        "source_manifest": manifest_path.name,
        "counts": counts,
        "sessions": sessions_meta,
        "test_sessions": test_names,
    })
    print(f"windows: train={counts['train']} val={counts['val']} "
          f"(test sessions left raw for eval: {len(test_names)})")
    print(f"out: {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# train


def _load_windows_meta(windows_dir: Path) -> dict:
    meta_path = windows_dir / "windows.json"
    if not meta_path.is_file():
        raise CliError(f"window set not found: {meta_path} "
                       f"(run 'doorimu preprocess' first)")
    meta = json.loads(meta_path.read_text())
    if meta.get("kind") != WINDOWS_KIND or meta.get("schema_version") != 1:
        raise CliError(f"{meta_path}: not a version-1 {WINDOWS_KIND} file")
    return meta


def _load_role_matrices(windows_dir: Path, role: str):
    out = []
    for part in ("gyro", "accel", "targets"):
        path = windows_dir / f"{role}_{part}.npy"
        if not path.is_file():
            raise CliError(f"missing {path} (run 'doorimu preprocess' first)")
        out.append(np.load(path))
    return out


def _model_inputs(arch: str, gyro, accel):
    return gyro if arch == "g" else (accel, gyro)


def cmd_train(args) -> int:
    windows_dir = (Path(args.data_dir) if args.data_dir
                   else _default_data_dir() / "windows")
    meta = _load_windows_meta(windows_dir)

    defaults = {f.name: getattr(TrainConfig(), f.name)
                for f in dataclass_fields(TrainConfig)}
    defaults.update({"width_scale": 1.0, "dropout": 0.2})
    merged = _merge_config(
        defaults, args,
        {"seed": args.seed, "epochs": args.epochs, "width_scale": args.width_scale},
        "train",
    )
    width_scale = float(merged.pop("width_scale"))
    dropout = float(merged.pop("dropout"))
    try:
        tconfig = TrainConfig(**merged)
    except (TypeError, ValueError) as err:
        raise CliError(f"train config: {err}") from None

    train_gyro, train_accel, train_targets = _load_role_matrices(windows_dir, "train")
    val_gyro, val_accel, val_targets = _load_role_matrices(windows_dir, "val")

    arch = args.model
    start_epoch = 0
    optimizer = None
    if args.resume:
        try:
            model, header, opt_state = load_checkpoint(args.resume)
        except (OSError, ValueError) as err:
            raise CliError(f"cannot resume: {err}") from None
        if header["arch"] != arch:
            raise CliError(f"{args.resume} holds a {header['arch']!r} model "
                           f"but --model asked for {arch!r}")
        start_epoch = int(header["epoch"])
        if opt_state is not None:
            optimizer = resume_optimizer(model, tconfig, opt_state)
    else:
        model = BUILDERS[arch](seed=tconfig.seed, window=meta["window_len"],
                               width_scale=width_scale, dropout_p=dropout)
    if model.config["window"] != meta["window_len"]:
        raise CliError(f"model window {model.config['window']} does not match "
                       f"the window set ({meta['window_len']})")
    if start_epoch >= tconfig.epochs:
        raise CliError(f"checkpoint is already at epoch {start_epoch}; raise "
                       f"epochs (currently {tconfig.epochs}) to continue")

    print(f"model {arch}: {param_count(model):,} parameters, "
          f"window {meta['window_len']}, width x{width_scale:g}")

    def log(epoch, train_loss, val_loss, lr):
        print(f"epoch {epoch + 1:>4}/{tconfig.epochs} "
              f"train {train_loss:.6f} val {val_loss:.6f} lr {lr:.2e}")

    result, optimizer = train(
        model,
        _model_inputs(arch, train_gyro, train_accel), train_targets,
        _model_inputs(arch, val_gyro, val_accel), val_targets,
        tconfig, optimizer=optimizer, start_epoch=start_epoch, log=log,
    )

    out_dir = Path(args.out_dir) if args.out_dir else windows_dir.parent / f"run_{arch}"
    out_dir.mkdir(parents=True, exist_ok=True)
    ckpt_path = out_dir / "model.ckpt"
    save_checkpoint(ckpt_path, model, seed=tconfig.seed,
                    epoch=start_epoch + result.epochs_run,
                    train_config=train_config_dict(tconfig), optimizer=optimizer)
    history = result.history()
    _write_json(out_dir / "history.json", {
        "kind": "doorimu-history",
        "schema_version": 1,
        "arch": arch,
        "start_epoch": start_epoch,
        **history,
    })
    save_loss_curves(out_dir / "loss_curves.svg", history,
                     title=f"{arch} training loss")
    print(f"checkpoint: {ckpt_path}")
    print(f"final train {history['train_loss'][-1]:.6f} "
          f"val {history['val_loss'][-1]:.6f} "
          f"after epoch {start_epoch + result.epochs_run}")
    return 0


# ---------------------------------------------------------------------------
# eval


EVAL_DEFAULTS = {
    "window_len": 20,
    "calibrate": True,
    "k_init": 10.0,
    "k_norm": 0.5,
    "t_init": 3.0,
    "stationary_threshold": 0.05,
    "vector_form": "gravity_z",
}


def _load_net_checkpoints(paths, requested_model):
    nets = {}
    for p in paths or ():
        path = Path(p)
        if not path.is_file():
            raise CliError(f"checkpoint not found: {path}")
        try:
            model, header, _ = load_checkpoint(path)
        except ValueError as err:
            raise CliError(str(err)) from None
        arch = header["arch"]
        if arch in nets:
            raise CliError(f"two checkpoints for architecture {arch!r}; "
                           f"pass one per model")
        nets[arch] = model
    if requested_model and requested_model not in nets:
        raise CliError(f"--model {requested_model} requested but no matching "
                       f"checkpoint was given")
    return nets


def _sampled_series(full: HeadingSeries, grid: np.ndarray, psi0: float) -> HeadingSeries:
    vals = np.asarray(full.at(grid), dtype=float)
    return HeadingSeries(grid, vals - vals[0] + psi0)


def _session_estimates(session, gt, nets, cfg) -> dict:
    """All estimator headings on a common grid: the first window start plus
    every window end.  Windows tile with a shared boundary sample (stride =
    window_len - 1) so per-window increments add up to the heading exactly
    and every estimator answers for the same spans."""
    window_len = cfg["window_len"]
    windows = make_windows(session, window_len=window_len, stride=window_len - 1)
    if not windows:
        raise CliError(f"{session.imu_id}: shorter than one window")
    gyro_w, accel_w, _, t_end = window_matrices(windows)
    grid = np.concatenate([[windows[0].t_start], t_end])
    psi0 = float(gt.at(grid[0]))

    mcfg = MadgwickConfig(
        sample_period=1.0 / session.rate_hz,
        k_init=cfg["k_init"], k_norm=cfg["k_norm"], t_init=cfg["t_init"],
        stationary_threshold=cfg["stationary_threshold"],
        vector_form=cfg["vector_form"],
    )
    out = {}
    for name in cfg["estimators"]:
        if name == "integration":
            full = integrate_gyro(session.t, session.gyro)
        elif name == "madgwick":
            full = madgwick_run(mcfg, session.t, session.gyro, session.accel)
        elif name == "madgwick_thresholded":
            full = run_thresholded(mcfg, session.t, session.gyro, session.accel)
        elif name == "gt":
            full = gt
        else:
            raise CliError(f"unknown estimator {name!r} (valid: "
                           f"{', '.join(FILTER_ESTIMATORS)}, gt)")
        out[name] = _sampled_series(full, grid, psi0)
    for arch, model in nets.items():
        preds = predict(model, _model_inputs(arch, gyro_w, accel_w))
        rec = reconstruct_heading(preds, psi0=psi0, t=t_end)
        out[arch] = HeadingSeries(grid, np.concatenate([[psi0], rec.heading_deg]))
    return out


def _pooled_report(estimator: str, dataset: str, per_session) -> MetricsReport:
    """Aggregate one estimator over several sessions.  Increment errors pool
    directly; heading gaps restart their running sum at each session, so the
    pooled heading RMSE is the RMS over the concatenated per-session gap
    arrays, and end drift / max drift take the worst session."""
    incs_y, incs_yh, gaps, lpds, mads = [], [], [], [], []
    for y, y_hat, report in per_session:
        incs_y.append(y)
        incs_yh.append(y_hat)
        gaps.append(np.cumsum(y - y_hat))
        lpds.append(report.lpd_deg)
        mads.append(report.mad_deg)
    all_gaps = np.concatenate(gaps)
    return MetricsReport(
        estimator=estimator,
        dataset=dataset,
        n_windows=int(all_gaps.size),
        rmse_deg=rmse(np.concatenate(incs_y), np.concatenate(incs_yh)),
        lpd_deg=float(max(lpds)),
        mad_deg=float(max(mads)),
        heading_rmse_deg=float(np.sqrt(np.mean(all_gaps ** 2))),
    )


def cmd_eval(args) -> int:
    manifest_path = _resolve_manifest(args)
    manifest = load_manifest(manifest_path)
    cfg = _merge_config(EVAL_DEFAULTS, args, {}, "eval")
    cfg["estimators"] = tuple(
        s.strip() for s in (args.estimators or ",".join(FILTER_ESTIMATORS)).split(",")
        if s.strip()
    )
    nets = _load_net_checkpoints(args.checkpoint, args.model)
    windows = {m.config["window"] for m in nets.values()}
    if len(windows) > 1:
        raise CliError(f"checkpoints disagree on window length: {sorted(windows)}")
    if windows:
        cfg["window_len"] = windows.pop()

    role = args.role
    entries = [e for e in manifest["sessions"] if e["role"] == role]
    if not entries:
        raise CliError(f"manifest has no {role!r} sessions")
    out_dir = Path(args.out_dir) if args.out_dir else manifest_path.parent / "eval"
    out_dir.mkdir(parents=True, exist_ok=True)

    per_estimator = {}
    session_reports = []
    for entry in entries:
        raw = load_manifest_session(manifest_path, entry)
        gt = raw.gt
        session = (calibrate_gyro(raw, entry["calibration_window"])
                   if cfg["calibrate"] else raw)
        estimates = _session_estimates(session, gt, nets, cfg)
        for name, series in estimates.items():
            report = evaluate(series, gt, estimator=name, dataset=entry["name"])
            save_report(out_dir / f"report_{entry['name']}_{name}.json", report)
            session_reports.append(report)
            y, y_hat, _ = increments_on_common_base(series, gt)
            per_estimator.setdefault(name, []).append((y, y_hat, report))
        save_heading_overlay(
            out_dir / f"heading_{entry['name']}.svg", gt,
            {k: v for k, v in estimates.items() if k != "gt"},
            title=f"{entry['name']} heading",
        )

    if len(entries) > 1:
        dataset = f"{manifest_path.parent.name}:{role}"
        table_reports = []
        for name, rows in per_estimator.items():
            pooled = _pooled_report(name, dataset, rows)
            save_report(out_dir / f"report_all_{name}.json", pooled)
            table_reports.append(pooled)
    else:
        table_reports = session_reports
    print(format_table(table_reports), end="")
    print(f"reports and plots: {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# compare


def cmd_compare(args) -> int:
    reports = []
    for p in args.reports:
        try:
            reports.append(load_report(p))
        except OSError as err:
            raise CliError(str(err)) from None
    datasets = sorted({r.dataset for r in reports})
    if len(datasets) > 1 and not args.allow_mixed:
        raise CliError(f"reports span multiple datasets: {', '.join(datasets)} "
                       f"(pass --allow-mixed to combine anyway)")
    table = format_table(reports)
    print(table, end="")
    if args.out:
        ranked = sorted(reports, key=lambda r: r.rmse_deg)
        _write_json(Path(args.out), {
            "kind": TABLE_KIND,
            "schema_version": 1,
            "reports": [r.to_dict() for r in ranked],
        })
        print(f"table: {args.out}")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="doorimu",
        description="Door-mounted IMU heading estimation workbench.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, data_dir=True):
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--out-dir", help="output directory")
        if data_dir:
            p.add_argument("--data-dir",
                           help=f"data directory (default ${DATA_DIR_ENV} or ./data)")

    p = sub.add_parser("simulate", help="generate a synthetic door-swing corpus")
    add_common(p, data_dir=False)
    p.add_argument("--seed", type=int, help="corpus seed")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("preprocess", help="calibrate, re-zero, and window a corpus")
    add_common(p)
    p.add_argument("--window-len", type=int, help="samples per window")
    p.add_argument("--stride", type=int, help="samples between window starts")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("train", help="train a heading-increment regressor")
    add_common(p)
    p.add_argument("--model", choices=sorted(BUILDERS), default="ag",
                   help="architecture (default: ag)")
    p.add_argument("--seed", type=int, help="training seed")
    p.add_argument("--epochs", type=int, help="epoch budget")
    p.add_argument("--width-scale", type=float,
                   help="shrink factor for layer widths")
    p.add_argument("--resume", help="checkpoint to continue from")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="score estimators against ground truth")
    add_common(p)
    p.add_argument("--model", choices=sorted(BUILDERS),
                   help="require this architecture among the checkpoints")
    p.add_argument("--checkpoint", action="append",
                   help="trained model checkpoint (repeatable)")
    p.add_argument("--role", default="test", choices=("train", "val", "test"),
                   help="manifest role to evaluate (default: test)")
    p.add_argument("--estimators",
                   help="comma list among: integration, madgwick, "
                        "madgwick_thresholded, gt")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="merge metric reports into one table")
    p.add_argument("reports", nargs="+", help="report JSON files")
    p.add_argument("--allow-mixed", action="store_true",
                   help="combine reports from different datasets")
    p.add_argument("--out", help="write the merged table as JSON")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as err:
        # library-level validation and filesystem problems are user errors
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
