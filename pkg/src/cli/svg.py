"""
CLI - SVG Plots

Diagnostic scatter plots rendered with matplotlib's SVG backend.
"""

import io
from typing import Dict, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# Stable element ids so repeated runs write identical files.
matplotlib.rcParams["svg.hashsalt"] = "weierdiv"

Point = Tuple[float, float]


def scatter(
    groups: Dict[int, Sequence[Point]],
    title: str,
    x_label: str = "Re z",
    y_label: str = "Im z",
    lines: Optional[Sequence[Sequence[Point]]] = None,
) -> str:
    """Scatter plot with one color per group, plus optional black polylines."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    try:
        for key in sorted(groups):
            points = list(groups[key])
            if points:
                xs, ys = zip(*points)
                ax.scatter(xs, ys, s=4, label=f"{key}")
        for line in lines or []:
            if line:
                xs, ys = zip(*line)
                ax.plot(xs, ys, color="black", linewidth=1.2)
        ax.set_title(title)
        ax.set_xlabel(x_label)
        ax.set_ylabel(y_label)
        if len(groups) > 1:
            ax.legend(fontsize="small", markerscale=2)
        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", bbox_inches="tight", metadata={"Date": None})
        return buffer.getvalue()
    finally:
        plt.close(fig)
