"""Power curves against KL divergence, written straight to file."""

from __future__ import annotations

import math
import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["curve_label", "emit_power_plot", "plot_power"]

_FIXED_COLORS = {
    ("rpbt", None): "red",
    ("alpha_ebt", 1.0): "blue",
    ("alpha_ebt", 0.1): "green",
}
_OTHER_COLORS = ("orange", "purple", "brown", "black", "gray", "olive", "cyan")


def curve_label(method, alpha):
    if method == "rpbt":
        return "RPBT"
    return f"α-EBT (α = {alpha:g})"


def _curves(rows):
    curves = defaultdict(list)
    for r in rows:
        curves[(r.method, r.alpha)].append((r.kl_divergence, min(max(r.rejection_rate, 0.0), 1.0)))
    for pts in curves.values():
        pts.sort()
    return curves


def plot_power(rows, ax=None, level=None):
    """Draw one power curve per (method, alpha) on `ax`; returns the axes."""
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to plot")
    if len({r.scenario_id for r in rows}) != 1:
        raise ValueError("rows from more than one scenario")
    if ax is None:
        _, ax = plt.subplots(figsize=(5, 3.5))
    spare = iter(_OTHER_COLORS)
    curves = _curves(rows)
    for key in sorted(curves, key=lambda m: (m[0] != "rpbt", -(m[1] or 0.0))):
        xs, ys = zip(*curves[key])
        color = _FIXED_COLORS.get(key) or next(spare, None)
        ax.plot(xs, ys, marker="o", ms=3, color=color, label=curve_label(*key))
    if level is not None:
        ax.axhline(level, color="0.6", lw=0.8, ls="--")
    ax.set_ylim(-0.02, 1.02)
    ax.set_xlabel("KL divergence")
    ax.set_ylabel("Estimated power")
    ax.legend(loc="lower right", fontsize="small", frameon=False)
    return ax


def emit_power_plot(rows, path, level=None) -> str:
    """Write the power curves of one scenario to an SVG file.

    Several sample sizes get one panel each.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to plot")
    if len({r.scenario_id for r in rows}) != 1:
        raise ValueError("rows from more than one scenario")
    by_n = defaultdict(list)
    for r in rows:
        by_n[r.n].append(r)
    sizes = sorted(by_n)
    ncols = min(3, len(sizes))
    nrows = math.ceil(len(sizes) / ncols)
    with plt.rc_context({"svg.hashsalt": "alphaebt", "svg.fonttype": "path"}):
        fig, axes = plt.subplots(nrows, ncols, figsize=(4.5 * ncols, 3.5 * nrows), squeeze=False)
        for ax, n in zip(axes.flat, sizes):
            plot_power(by_n[n], ax=ax, level=level)
            ax.set_title(f"Scenario {rows[0].scenario_id}, D = {rows[0].D}, n = {n}", fontsize="medium")
        for ax in list(axes.flat)[len(sizes):]:
            ax.set_visible(False)
        fig.tight_layout()
        d = os.path.dirname(os.fspath(path))
        if d:
            os.makedirs(d, exist_ok=True)
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return os.fspath(path)
