"""Per-property window grids: one row per day, one cell per window."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402
from matplotlib.patches import Patch  # noqa: E402
import numpy as np  # noqa: E402

from .checker import VerdictReport  # noqa: E402

_CODES = {"empty": 0, "violated": 1, "satisfied": 2}
_COLOURS = ["#d9d9d9", "#d6604d", "#4393c3"]


def window_grid(report: VerdictReport, prop: str) -> tuple[np.ndarray, list[str], list[str]]:
    rows = [r for r in report.rows if r.property == prop]
    n = max((len(r.windows) for r in rows), default=0)
    grid = np.full((len(rows), n), -1, dtype=int)
    for i, r in enumerate(rows):
        for j, w in enumerate(r.windows):
            grid[i, j] = _CODES[w.outcome]
    days = [r.date.strftime("%d-%m-%y") for r in rows]
    starts = [f"{w.start:%H:%M}" for w in rows[0].windows] if rows else []
    return grid, days, starts


def plot_property(report: VerdictReport, prop: str, target: str | Path) -> Path:
    grid, days, starts = window_grid(report, prop)
    fig, ax = plt.subplots(figsize=(max(4.0, 0.45 * len(starts) + 2), max(2.0, 0.4 * len(days) + 1.2)))
    masked = np.ma.masked_less(grid, 0)
    ax.imshow(masked, cmap=ListedColormap(_COLOURS), vmin=0, vmax=2, aspect="auto")
    ax.set_xticks(range(len(starts)), starts, rotation=90, fontsize=7)
    ax.set_yticks(range(len(days)), days, fontsize=8)
    ax.set_xlabel("window start")
    ax.set_title(prop, fontsize=10)
    ax.legend(
        handles=[Patch(color=c, label=k) for k, c in zip(_CODES, _COLOURS)],
        loc="upper left",
        bbox_to_anchor=(1.01, 1),
        fontsize=7,
        frameon=False,
    )
    fig.tight_layout()
    target = Path(target)
    # fixed metadata keeps repeated runs byte-identical
    fig.savefig(target, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return target


def plot_report(report: VerdictReport, directory: str | Path) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    return [plot_property(report, p.name, directory / f"{p.name}.png") for p in report.properties]
