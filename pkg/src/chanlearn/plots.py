"""Figure rendering for experiment reports.

Learning curves plot the running-average symbol error rate against the round
index, one faint line per seed plus the across-seed mean. Comparison figures
overlay the mean curves of several algorithms. Figures are written straight
to files; no interactive backend is required.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .harness import RoundRecord

__all__ = ["curves_by_seed", "mean_curve", "render_learning_curve", "render_comparison"]


def curves_by_seed(records: list[RoundRecord]) -> dict:
    """Split concatenated records into per-seed running-average curves."""
    curves: dict = {}
    for rec in records:
        seed = rec.extra.get("seed", 0)
        curves.setdefault(seed, []).append(rec.running_avg)
    return {seed: np.asarray(vals) for seed, vals in curves.items()}


def mean_curve(records: list[RoundRecord]) -> np.ndarray:
    curves = list(curves_by_seed(records).values())
    length = {len(c) for c in curves}
    if len(length) != 1:
        raise ValueError("seeds produced curves of different lengths")
    return np.mean(np.stack(curves), axis=0)


def render_learning_curve(records: list[RoundRecord], path, title: str = "") -> None:
    """Plot per-seed curves plus their mean and save the figure."""
    curves = curves_by_seed(records)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for seed, curve in sorted(curves.items()):
        ax.plot(np.arange(1, len(curve) + 1), curve, color="tab:blue", alpha=0.25, lw=0.8)
    mean = mean_curve(records)
    ax.plot(np.arange(1, len(mean) + 1), mean, color="tab:blue", lw=2.0, label="mean")
    ax.set_xlabel("round")
    ax.set_ylabel("average symbol error rate")
    if title:
        ax.set_title(title)
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_comparison(mean_curves: dict, path, title: str = "") -> None:
    """Overlay mean running-average curves keyed by label and save the figure."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, curve in mean_curves.items():
        curve = np.asarray(curve)
        ax.plot(np.arange(1, len(curve) + 1), curve, lw=1.8, label=label)
    ax.set_xlabel("round")
    ax.set_ylabel("average symbol error rate")
    if title:
        ax.set_title(title)
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
