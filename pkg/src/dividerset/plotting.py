"""Figures for curves, evolutes, Divider traces and lattice results.

Uses :class:`matplotlib.figure.Figure` directly, so no global pyplot state
or interactive backend is involved.  SVG output is written without a date
stamp and with a fixed hash salt, so reruns produce identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib
import numpy as np
from matplotlib.colors import ListedColormap
from matplotlib.figure import Figure

CURVE_COLOR = "black"
EVOLUTE_COLOR = "tab:blue"
DIVIDER_COLOR = "tab:red"
_LONG_SIDE_IN = 6.0


def auto_window(*point_sets, pad: float = 0.08):
    """Bounding box of all finite points, padded by ``pad`` of its size."""
    pts = np.concatenate([np.asarray(p, dtype=float).reshape(-1, 2) for p in point_sets])
    pts = pts[np.isfinite(pts).all(1)]
    lo, hi = pts.min(0), pts.max(0)
    span = np.maximum(hi - lo, 1e-9 * max(1.0, np.abs(pts).max()))
    m = pad * span.max()
    return (float(lo[0] - m), float(lo[1] - m), float(hi[0] + m), float(hi[1] + m))


def figure_size(window) -> tuple[float, float]:
    """Inches, proportional to the window, long side fixed."""
    x0, y0, x1, y1 = window
    w, h = x1 - x0, y1 - y0
    s = _LONG_SIDE_IN / max(w, h)
    return max(w * s, 1.5), max(h * s, 1.5)


def _save(fig: Figure, path) -> Path:
    path = Path(path)
    fmt = path.suffix.lstrip(".").lower() or "svg"
    meta = {"Date": None} if fmt in ("svg", "pdf") else {}
    with matplotlib.rc_context({"svg.hashsalt": "dividerset", "svg.fonttype": "none"}):
        fig.savefig(path, format=fmt, metadata=meta, bbox_inches="tight")
    return path


def curve_figure(path, curve_xy, window, *, evolute_xy=None, divider_lines=(),
                 divider_points=None, cusps=None, raster=None, title: str | None = None) -> Path:
    """Curve in black, evolute in blue, Divider in red, optional raster underlay.

    Parameters
    ----------
    curve_xy : array (n, 2)
    window : (x0, y0, x1, y1)
    evolute_xy : array (m, 2), optional
        ``nan`` rows break the line.
    divider_lines : sequence of arrays (k, 2)
    divider_points : array (j, 2), optional
        Isolated centres drawn as dots (junctions, zero-radius points).
    raster : Raster, optional
        Cells with positive values are shaded.
    """
    x0, y0, x1, y1 = window
    fig = Figure(figsize=figure_size(window))
    ax = fig.add_subplot()
    if raster is not None:
        shade = ListedColormap(["white", "#f2d7a6"])
        rx0, ry0, rx1, ry1 = raster.window
        ax.imshow((raster.values > 0).astype(float), origin="lower", cmap=shade,
                  extent=(rx0, rx1, ry0, ry1), interpolation="nearest", vmin=0, vmax=1, zorder=0)
    c = np.asarray(curve_xy, dtype=float)
    ax.plot(c[:, 0], c[:, 1], color=CURVE_COLOR, lw=1.2, zorder=3)
    if evolute_xy is not None:
        e = np.asarray(evolute_xy, dtype=float)
        ax.plot(e[:, 0], e[:, 1], color=EVOLUTE_COLOR, lw=0.8, zorder=2)
    for ln in divider_lines:
        ln = np.asarray(ln, dtype=float).reshape(-1, 2)
        if len(ln) > 1:
            ax.plot(ln[:, 0], ln[:, 1], color=DIVIDER_COLOR, lw=1.4, zorder=4)
        else:
            ax.plot(ln[:, 0], ln[:, 1], "o", color=DIVIDER_COLOR, ms=3, zorder=4)
    if divider_points is not None and len(divider_points):
        p = np.asarray(divider_points, dtype=float).reshape(-1, 2)
        ax.plot(p[:, 0], p[:, 1], "o", color=DIVIDER_COLOR, ms=3.5, zorder=5)
    if cusps is not None and len(cusps):
        q = np.asarray(cusps, dtype=float).reshape(-1, 2)
        ax.plot(q[:, 0], q[:, 1], "^", color=EVOLUTE_COLOR, ms=4, zorder=5)
    ax.set_xlim(x0, x1)
    ax.set_ylim(y0, y1)
    ax.set_aspect("equal")
    ax.tick_params(labelsize=7)
    if title:
        ax.set_title(title, fontsize=9)
    return _save(fig, path)


def lattice_figure(path, foreground: np.ndarray, mask: np.ndarray, distance=None,
                   title: str | None = None) -> Path:
    """Distance field (grey) with Divider cells overlaid in red, row 0 at the top."""
    h, w = foreground.shape
    fig = Figure(figsize=figure_size((0, 0, w, h)))
    ax = fig.add_subplot()
    if distance is not None:
        d = np.where(foreground, distance, np.nan)
        ax.imshow(d, cmap="Greys", interpolation="nearest", extent=(0, w, h, 0))
    else:
        ax.imshow(foreground, cmap="Greys", interpolation="nearest", extent=(0, w, h, 0),
                  vmin=0, vmax=2)
    ys, xs = np.nonzero(mask)
    ax.plot(xs + 0.5, ys + 0.5, "s", color=DIVIDER_COLOR, ms=max(1.0, 160.0 / max(w, h)),
            ls="none")
    ax.set_xlim(0, w)
    ax.set_ylim(h, 0)
    ax.set_aspect("equal")
    ax.tick_params(labelsize=7)
    if title:
        ax.set_title(title, fontsize=9)
    return _save(fig, path)
