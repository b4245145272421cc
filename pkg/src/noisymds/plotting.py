"""SVG figure output for rate sweeps."""

import numpy as np
from matplotlib.figure import Figure


def emit_svg_plot(groups, path, reference_slope=-0.5, xlabel="n", ylabel="loss",
                  title=None):
    """Plot per-group median curves on log-log axes with 10-90% bands.

    ``groups`` maps a label to a :class:`~noisymds.harness.RateFit`.  A
    dashed reference line with slope ``reference_slope`` is anchored at the
    largest-n median of the first group.
    """
    if not groups:
        raise ValueError("no groups to plot")
    fig = Figure(figsize=(6.4, 4.8))
    ax = fig.subplots()
    for label, rf in groups.items():
        (line,) = ax.loglog(rf.n_values, rf.medians, marker="o", label=label)
        ax.fill_between(rf.n_values, rf.band_lo, rf.band_hi,
                        color=line.get_color(), alpha=0.2, linewidth=0)
    first = next(iter(groups.values()))
    x_lo = min(rf.n_values[0] for rf in groups.values())
    x_hi = max(rf.n_values[-1] for rf in groups.values())
    anchor_x, anchor_y = first.n_values[-1], first.medians[-1]
    xs = np.array([x_lo, x_hi], dtype=float)
    ax.loglog(xs, anchor_y * (xs / anchor_x) ** reference_slope, "k--",
              label=f"slope {reference_slope:g}")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.savefig(path, format="svg", bbox_inches="tight")
