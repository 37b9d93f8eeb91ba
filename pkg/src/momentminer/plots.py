"""Keyness bar charts rendered with matplotlib.

Charts are written as SVG.  Output is byte-reproducible: the SVG id salt
is pinned and the date metadata is dropped, so identical inputs give
identical files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "momentminer"

import matplotlib.pyplot as plt

from .lexstats import KeynessRow

TARGET_COLOR = "#4c72b0"
REFERENCE_COLOR = "#dd8452"


def _panel(ax, rows, label, color):
    rows = list(rows)
    words = [r.word for r in rows][::-1]
    scores = [r.g2 for r in rows][::-1]
    ax.barh(range(len(rows)), scores, color=color, height=0.7)
    ax.set_yticks(range(len(rows)))
    ax.set_yticklabels(words)
    ax.set_title(label)
    ax.set_xlabel("log-likelihood ratio (G2)")
    ax.margins(y=0.02)


def keyness_chart(rows: Iterable[KeynessRow], target_label: str,
                  reference_label: str, title: str, path: str | Path,
                  top_n: int = 20) -> None:
    """Two-panel horizontal bar chart: top lemmas per side of the contrast."""
    rows = list(rows)
    target_rows = [r for r in rows if r.direction == "target"][:top_n]
    reference_rows = [r for r in rows if r.direction == "reference"][:top_n]
    n_bars = max(len(target_rows), len(reference_rows), 1)
    fig, axes = plt.subplots(
        1, 2, figsize=(9.0, 0.3 * n_bars + 1.6), sharex=True
    )
    _panel(axes[0], target_rows, target_label, TARGET_COLOR)
    _panel(axes[1], reference_rows, reference_label, REFERENCE_COLOR)
    fig.suptitle(title)
    fig.tight_layout(rect=(0, 0, 1, 0.96))
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
