"""CSV and SVG output."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ..rsstats import histogram, kde, kde_grid, normal_pdf  # noqa: E402

SIG_DIGITS = 15
SVG_SIZE = (800, 500)
_DPI = 100


def fmt(value) -> str:
    """CSV cell: reals at 15 significant digits, None as empty."""
    if value is None:
        return ""
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v) or math.isinf(v):
            return repr(v)
        return f"{v:.{SIG_DIGITS}g}"
    if isinstance(value, (list, tuple)):
        return " ".join(fmt(v) for v in value)
    return str(value)


def csv_text(columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(csv_text(columns, rows))
    return path


@dataclass(frozen=True)
class SeriesBundle:
    """Everything drawn in a distribution plot."""

    zs: Sequence[float]
    title: str = ""
    bins: int | None = None


def _save_svg(fig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with matplotlib.rc_context({"svg.hashsalt": "bsdtwist", "svg.fonttype": "path"}):
        fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)
    return path


def normal_overlay(lo: float, hi: float, points: int = 401) -> tuple[np.ndarray, np.ndarray]:
    """Standard normal density on a symmetric-friendly grid (odd point count hits 0 when lo = -hi)."""
    x = np.linspace(lo, hi, points)
    return x, np.array([normal_pdf(t) for t in x])


def write_svg(bundle: SeriesBundle, path: str | Path) -> Path:
    """Histogram, kernel density estimate and a dashed N(0,1) density."""
    zs = np.asarray(bundle.zs, dtype=float)
    if zs.size == 0:
        raise ValueError("empty series")
    fig, ax = plt.subplots(figsize=(SVG_SIZE[0] / _DPI, SVG_SIZE[1] / _DPI), dpi=_DPI)
    edges, density = histogram(zs, bundle.bins)
    ax.bar(edges[:-1], density, width=np.diff(edges), align="edge", color="#c6dbef",
           edgecolor="#6baed6", linewidth=0.5, label="histogram")
    lo, hi = min(float(zs.min()), -4.0), max(float(zs.max()), 4.0)
    if zs.size >= 2 and np.std(zs) > 0:
        grid = kde_grid(zs)
        ax.plot(grid, kde(zs, grid), color="#08519c", linewidth=1.5, label="KDE")
        lo, hi = min(lo, float(grid[0])), max(hi, float(grid[-1]))
    x, y = normal_overlay(lo, hi)
    ax.plot(x, y, "k--", linewidth=1.2, label="N(0,1)")
    ax.set_xlabel("Z")
    ax.set_ylabel("density")
    if bundle.title:
        ax.set_title(bundle.title)
    ax.legend(loc="upper right")
    fig.tight_layout()
    return _save_svg(fig, path)


def write_distance_svg(xs: Sequence[int], ks: Sequence[float], w1: Sequence[float],
                       path: str | Path, title: str = "") -> Path:
    """KS and W1 distance against the family bound."""
    if not xs:
        raise ValueError("empty series")
    fig, ax = plt.subplots(figsize=(SVG_SIZE[0] / _DPI, SVG_SIZE[1] / _DPI), dpi=_DPI)
    ax.plot(xs, ks, "o-", label="Kolmogorov-Smirnov")
    ax.plot(xs, w1, "s-", label="Wasserstein-1")
    ax.set_xscale("log")
    ax.set_xlabel("X")
    ax.set_ylabel("distance to N(0,1)")
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    return _save_svg(fig, path)
