"""Presentation-only figures.

Everything here renders to SVG and never feeds back into computation.  The
hash salt and document date are pinned so that rerunning a pipeline with the
same inputs rewrites byte-identical figure files.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  backend must be set first

from .quat import HeadingSeries

__all__ = ["save_heading_overlay", "save_loss_curves"]

# Colors cycle in dict order; GT is always drawn first and darkest.
_GT_STYLE = {"color": "0.15", "linewidth": 1.6, "zorder": 5}
_EST_COLORS = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def _new_figure(width: float = 8.0, height: float = 4.5):
    plt.rcParams["svg.hashsalt"] = "doorimu"
    fig, ax = plt.subplots(figsize=(width, height))
    return fig, ax


def _save(fig, path) -> None:
    fig.tight_layout()
    # Date: None drops the creation timestamp from the SVG header.
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def save_heading_overlay(path, gt: HeadingSeries,
                         estimates: Mapping[str, HeadingSeries],
                         title: str = "") -> None:
    """Plot ground-truth heading with estimator overlays.

    ``estimates`` maps display label to heading series; drawn in dict order.
    """
    fig, ax = _new_figure()
    ax.plot(gt.t, gt.heading_deg, label="ground truth", **_GT_STYLE)
    for i, (label, series) in enumerate(estimates.items()):
        ax.plot(series.t, series.heading_deg, label=label,
                color=_EST_COLORS[i % len(_EST_COLORS)], linewidth=1.0)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("heading [deg]")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=9)
    _save(fig, path)


def save_loss_curves(path, history: Mapping[str, Sequence[float]],
                     title: str = "training loss") -> None:
    """Plot per-epoch loss curves (and learning rate on a twin axis if given).

    ``history`` uses the trainer's layout: ``train_loss`` and ``val_loss``
    are loss-vs-epoch lists, an optional ``lr`` list is drawn on a log-scaled
    secondary axis.
    """
    fig, ax = _new_figure(width=7.0, height=4.0)
    epochs = range(1, len(history["train_loss"]) + 1)
    ax.plot(epochs, history["train_loss"], label="train", color="#1f77b4")
    if "val_loss" in history and len(history["val_loss"]):
        ax.plot(epochs, history["val_loss"], label="validation", color="#d62728")
    ax.set_xlabel("epoch")
    ax.set_ylabel("loss")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    if "lr" in history and len(history["lr"]):
        ax2 = ax.twinx()
        ax2.plot(epochs, history["lr"], color="0.5", linestyle="--", linewidth=0.9)
        ax2.set_ylabel("learning rate", color="0.4")
        ax2.set_yscale("log")
        ax2.tick_params(axis="y", colors="0.4")
    ax.legend(loc="upper right", fontsize=9)
    _save(fig, path)
