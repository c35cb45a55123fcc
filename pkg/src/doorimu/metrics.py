"""Evaluation metrics over per-window heading increments, plus report files.

All three headline metrics take two equal-length increment sequences, the
reference y and an estimate y_hat:

    rmse  sqrt(mean((y - y_hat)^2))                per-window error
    lpd   |sum(y) - sum(y_hat)|                    end-of-run gap
    mad   max_k |cumsum(y)_k - cumsum(y_hat)_k|    worst running gap

plus heading_rmse, the RMS of that running cumulative gap: how far the
rebuilt heading sits from the reference on average, which is what matters
for an estimator whose increments are individually tiny but biased.

Sums are accumulated strictly left-to-right (cumulative-sum semantics), so a
plain loop computes bit-identical values; reports serialize to canonical
JSON so identical runs write identical bytes.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .quat import HeadingSeries

REPORT_KIND = "doorimu-report"
REPORT_SCHEMA_VERSION = 1


def _increments(y, y_hat):
    y = np.asarray(y, dtype=np.float64)
    y_hat = np.asarray(y_hat, dtype=np.float64)
    if y.ndim != 1 or y_hat.ndim != 1:
        raise ValueError("increment sequences must be 1-D")
    if y.size == 0 or y.size != y_hat.size:
        raise ValueError("increment sequences must be nonempty and equal length")
    return y, y_hat


def rmse(y, y_hat) -> float:
    """Root-mean-square of the per-window increment differences, degrees."""
    y, y_hat = _increments(y, y_hat)
    d = y - y_hat
    total = float(np.cumsum(d * d)[-1])
    return math.sqrt(total / d.size)


def lpd(y, y_hat) -> float:
    """Last point difference: absolute gap between the two increment sums."""
    y, y_hat = _increments(y, y_hat)
    return abs(float(np.cumsum(y)[-1]) - float(np.cumsum(y_hat)[-1]))


def mad(y, y_hat) -> float:
    """Maximum absolute difference between the running cumulative sums."""
    y, y_hat = _increments(y, y_hat)
    return float(np.max(np.abs(np.cumsum(y) - np.cumsum(y_hat))))


def heading_rmse(y, y_hat) -> float:
    """RMS of the running cumulative gap (rebuilt-heading error), degrees."""
    y, y_hat = _increments(y, y_hat)
    gap = np.cumsum(y) - np.cumsum(y_hat)
    total = float(np.cumsum(gap * gap)[-1])
    return math.sqrt(total / gap.size)


@dataclass(frozen=True)
class MetricsReport:
    """One estimator's scores on one dataset."""

    estimator: str
    dataset: str
    n_windows: int
    rmse_deg: float
    lpd_deg: float
    mad_deg: float
    heading_rmse_deg: float

    def __post_init__(self):
        if self.n_windows < 1:
            raise ValueError("n_windows must be positive")
        for name in ("rmse_deg", "lpd_deg", "mad_deg", "heading_rmse_deg"):
            if getattr(self, name) < 0.0 or not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite and non-negative")

    def to_dict(self) -> dict:
        out = {"kind": REPORT_KIND, "schema_version": REPORT_SCHEMA_VERSION}
        out.update(asdict(self))
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def report_from_dict(data: dict, source: str = "report") -> MetricsReport:
    if data.get("kind") != REPORT_KIND:
        raise ValueError(f"{source}: kind must be {REPORT_KIND!r}")
    if data.get("schema_version") != REPORT_SCHEMA_VERSION:
        raise ValueError(
            f"{source}: unsupported schema_version {data.get('schema_version')!r}"
        )
    fields = ("estimator", "dataset", "n_windows", "rmse_deg", "lpd_deg",
              "mad_deg", "heading_rmse_deg")
    missing = [f for f in fields if f not in data]
    if missing:
        raise ValueError(f"{source}: missing field(s) {', '.join(missing)}")
    return MetricsReport(**{f: data[f] for f in fields})


def save_report(path, report: MetricsReport):
    Path(path).write_text(report.to_json())


def load_report(path) -> MetricsReport:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise ValueError(f"{path}: not valid JSON ({err})") from None
    if not isinstance(data, dict):
        raise ValueError(f"{path}: report must be a JSON object")
    return report_from_dict(data, str(path))


def increments_on_common_base(estimated: HeadingSeries, gt: HeadingSeries):
    """Reduce two heading series to increments on the estimate's own points.

    The reference is linearly interpolated onto the estimate's timestamps
    inside the overlap, then both are differenced. Returns (y, y_hat, t)
    with t the shared window-end times (one shorter than the point count)."""
    lo = max(float(estimated.t[0]), float(gt.t[0]))
    hi = min(float(estimated.t[-1]), float(gt.t[-1]))
    if not lo < hi:
        raise ValueError("heading series do not overlap in time")
    inside = (estimated.t >= lo) & (estimated.t <= hi)
    t = estimated.t[inside]
    if t.size < 2:
        raise ValueError("overlap holds fewer than 2 estimate points")
    est = estimated.heading_deg[inside]
    ref = gt.at(t)
    return np.diff(ref), np.diff(est), t[1:]


def evaluate(estimated: HeadingSeries, gt: HeadingSeries, estimator: str = "",
             dataset: str = "") -> MetricsReport:
    """Score an estimated heading series against a reference."""
    y, y_hat, t = increments_on_common_base(estimated, gt)
    return MetricsReport(
        estimator=estimator,
        dataset=dataset,
        n_windows=int(y.size),
        rmse_deg=rmse(y, y_hat),
        lpd_deg=lpd(y, y_hat),
        mad_deg=mad(y, y_hat),
        heading_rmse_deg=heading_rmse(y, y_hat),
    )


def format_table(reports, sort_by: str = "rmse_deg") -> str:
    """Fixed-width comparison table, ascending by `sort_by`."""
    if not reports:
        raise ValueError("no reports to format")
    rows = sorted(reports, key=lambda r: getattr(r, sort_by))
    header = ("estimator", "dataset", "windows", "rmse_deg", "lpd_deg",
              "mad_deg", "heading_rmse_deg")
    table = [header]
    for r in rows:
        table.append((
            r.estimator, r.dataset, str(r.n_windows),
            f"{r.rmse_deg:.4f}", f"{r.lpd_deg:.4f}", f"{r.mad_deg:.4f}",
            f"{r.heading_rmse_deg:.4f}",
        ))
    widths = [max(len(row[c]) for row in table) for c in range(len(header))]
    lines = []
    for i, row in enumerate(table):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"
