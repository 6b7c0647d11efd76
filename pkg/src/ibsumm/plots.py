"""Figure rendering for run reports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .evalsuite import PositionHistogram  # noqa: E402


def render_position_histogram(
    histogram: PositionHistogram,
    path: str | Path,
    title: str = "Summary sentence position distribution",
) -> None:
    """Render the relative-position histogram as a bar chart PNG."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    edges = [i / histogram.bins for i in range(histogram.bins)]
    ax.bar(edges, histogram.mass, width=1.0 / histogram.bins,
           align="edge", edgecolor="black", linewidth=0.5)
    ax.set_xlabel("relative position in source document")
    ax.set_ylabel("fraction of summary sentences")
    ax.set_xlim(0, 1)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
