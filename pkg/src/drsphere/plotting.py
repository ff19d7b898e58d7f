"""Matplotlib figures for basins and orbits, rendered headless to files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from .basin import BasinGrid, Outcome, TrajectoryResult  # noqa: E402
from .export import OUTCOME_COLORS, ExportError  # noqa: E402


def _guides(ax, alpha: float) -> None:
    t = np.linspace(0, 2 * np.pi, 400)
    ax.plot(np.cos(t), np.sin(t), color="0.45", lw=0.8, ls="--")
    lo, hi = ax.get_xlim()
    ax.plot([lo, hi], [lo, hi], color="0.45", lw=0.8, ls="--")
    ax.axhline(alpha, color="0.45", lw=0.8, ls="--")
    ax.axvline(0, color="0.2", lw=0.6)


def _save(fig, path) -> None:
    path = Path(path)
    try:
        fig.savefig(path, dpi=150, bbox_inches="tight")
    except OSError as e:
        raise ExportError(f"cannot write figure to {path}: {e.strerror or e}") from e
    finally:
        plt.close(fig)


def plot_basin(grid: BasinGrid, path, guides: bool = True) -> None:
    cmap = ListedColormap([OUTCOME_COLORS[o] for o in Outcome])
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.imshow(grid.outcome_image(), origin="lower", cmap=cmap, vmin=-0.5,
              vmax=len(Outcome) - 0.5, interpolation="nearest",
              extent=(*grid.x_range, *grid.y_range))
    if guides:
        ax.set_autoscale_on(False)
        _guides(ax, grid.alpha)
    counts = grid.outcome_counts()
    handles = [plt.Rectangle((0, 0), 1, 1, color=OUTCOME_COLORS[o]) for o in Outcome]
    ax.legend(handles, [f"{o.value} ({counts[o.value]})" for o in Outcome],
              loc="upper center", bbox_to_anchor=(0.5, -0.08), ncol=2, fontsize=8)
    ax.set_xlabel("x0")
    ax.set_ylabel("y0")
    ax.set_title(f"basin, {grid.nx}x{grid.ny}, alpha={grid.alpha:.6g}")
    _save(fig, path)


def plot_orbit(result: TrajectoryResult, path, guides: bool = True) -> None:
    pts = np.array(result.orbit or [(result.start.x, result.start.y),
                                     (result.final.x, result.final.y)])
    fig, (ax, ax2) = plt.subplots(1, 2, figsize=(11, 5))
    ax.plot(pts[:, 0], pts[:, 1], "-o", ms=2, lw=0.8, color=OUTCOME_COLORS[Outcome.CONVERGED_RIGHT])
    ax.plot(*pts[0], "o", color=OUTCOME_COLORS[Outcome.CONVERGED_LEFT])
    ax.set_aspect("equal")
    if guides:
        ax.set_autoscale_on(False)
        _guides(ax, result.alpha)
    ax.set_title(f"orbit from ({result.start.x:.4g}, {result.start.y:.4g}): {result.outcome.value}")
    xs = 1.0 if result.final.x >= 0 else -1.0
    target = np.array([xs * np.sqrt(max(0.0, 1 - result.alpha ** 2)), result.alpha])
    d = np.sqrt(((pts - target) ** 2).sum(axis=1))
    d = np.where(d > 0, d, np.nan)
    ax2.semilogy(d, lw=0.8)
    ax2.set_xlabel("n")
    ax2.set_ylabel("distance to target")
    _save(fig, path)


def plot(result, path, guides: bool = True) -> None:
    if isinstance(result, BasinGrid):
        plot_basin(result, path, guides)
    else:
        plot_orbit(result, path, guides)
