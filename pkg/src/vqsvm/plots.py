"""Figure rendering for the CLI report paths.

Each function writes one PNG next to the delimited data it depicts:
classification scatters with hyperplane lines, and descent cost traces on a
log10 axis. Rendering is headless (Agg) and deterministic.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .svm import Dataset

_LINE_COLORS = {"exact": "magenta", "variational": "cyan"}


def save_dataset_figure(dataset: Dataset, lines: dict[str, tuple], path) -> None:
    """Scatter of the two classes, plus any hyperplane segments by label."""
    fig, ax = plt.subplots(figsize=(5.2, 5.0))
    red = dataset.points[dataset.labels == 1]
    blue = dataset.points[dataset.labels == -1]
    ax.scatter(red[:, 0], red[:, 1], s=18, c="tab:red", label="+1")
    ax.scatter(blue[:, 0], blue[:, 1], s=18, c="tab:blue", label="-1")
    for name, ((x0, y0), (x1, y1)) in lines.items():
        color = _LINE_COLORS.get(name)
        ax.plot([x0, x1], [y0, y1], label=name, color=color, linewidth=1.8)
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.legend(loc="best", fontsize=8)
    ax.set_title("binary classification")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_trace_figure(traces: dict[str, tuple[list[int], list[float]]], path) -> None:
    """log10 cost against descent step for one or more labeled traces."""
    fig, ax = plt.subplots(figsize=(5.6, 3.8))
    floor = 1e-300
    for name, (steps, costs) in traces.items():
        logs = np.log10(np.maximum(np.asarray(costs, dtype=np.float64), floor))
        ax.plot(steps, logs, label=name, linewidth=1.2)
    ax.set_xlabel("step")
    ax.set_ylabel("log10 cost")
    if len(traces) > 1 or any(k != "cost" for k in traces):
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
