"""SVG figures: the F_i radius functions and a static Newton polygon."""

from __future__ import annotations

from fractions import Fraction

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .newton import StaticPolygon  # noqa: E402
from .slopes import RadiiProfile  # noqa: E402

plt.rcParams["svg.hashsalt"] = "padslopes"


def _save(fig, path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def sample_points(s_max: Fraction, samples: int) -> list:
    return [s_max * k / samples for k in range(1, samples + 1)]


def plot_radii(profile: RadiiProfile, path, s_max: Fraction, samples: int = 200, label: str = "") -> None:
    """F_i(s) where determined; gaps are left where some f_j is indeterminate."""
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = sample_points(s_max, samples)
    for i in range(1, profile.n + 1):
        ys = [profile.sum_at(i, s) for s in xs]
        ax.plot([float(x) for x in xs], [float("nan") if y is None else float(y) for y in ys], label=f"F_{i}")
    ax.set_xlabel("s = -log_p(rho)")
    ax.set_ylabel("F_i(s)")
    if label:
        ax.set_title(label)
    ax.legend()
    _save(fig, path)


def plot_polygon(poly: StaticPolygon, path, label: str = "") -> None:
    fig, ax = plt.subplots(figsize=(5, 4))
    xs = [float(v[0]) for v in poly.vertices]
    ys = [float(v[1]) for v in poly.vertices]
    ax.plot(xs, ys, marker="o")
    ax.set_xlabel("-i")
    ax.set_ylabel("valuation")
    if label:
        ax.set_title(label)
    _save(fig, path)
