"""Curvature of locally convex type and the region where it is positive.

For a query point ``p`` let ``r_lct(p)`` be the smallest radius ``r`` for
which the part of the curve inside the closed disk ``B(p, r)`` is
disconnected.  The curvature of locally convex type is ``1 / r_lct`` (zero
when no radius disconnects).  In practice ``r_lct`` is the distance to the
second-nearest local minimum of the distance profile, which is what
:func:`lclt_curvature` computes; :func:`disconnection_radius_oracle` gets the
same number by brute-force counting of sublevel-set components.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .curves import ParametricCurve
from .geometry import DEFAULT_N_SCAN, MIN, Foot, FootKind, _table_to_feet, find_feet

GUARD_RTOL = 1e-12


@dataclass(frozen=True)
class LcltResult:
    """``k_lct = 1 / r_lct``; ``r_lct`` is ``inf`` when no disk disconnects."""

    k_lct: float
    r_lct: float
    feet_used: tuple[Foot, ...]
    member_of_pi: bool


def _arc_barrier(c: ParametricCurve, t_a, t_b, ts, ds):
    """Largest foot distance strictly between ``t_a`` and ``t_b`` on each arc."""
    lo, hi = min(t_a, t_b), max(t_a, t_b)
    inside = (ts > lo) & (ts < hi)
    first = ds[inside].max() if inside.any() else -np.inf
    if not c.closed:
        return (first,)
    outside = (ts < lo) | (ts > hi)
    second = ds[outside].max() if outside.any() else -np.inf
    return first, second


def _second_distance(c: ParametricCurve, ts, ds, kinds, eps):
    mins = np.nonzero(kinds == MIN)[0]
    if len(mins) < 2:
        return np.inf, mins[:1]
    i, j = mins[0], mins[1]
    level = ds[j] + eps
    # the sublevel set at the second distance must really split in two
    if all(b > level for b in _arc_barrier(c, ts[i], ts[j], ts, ds)):
        return float(ds[j]), mins[:2]
    return np.inf, mins[:2]


def lclt_field(c: ParametricCurve, points, n_scan: int = DEFAULT_N_SCAN):
    """``k_lct`` and ``r_lct`` for an array of query points of shape ``(m, 2)``."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    table = find_feet(c, pts, n_scan)
    eps = GUARD_RTOL * c.diameter
    r = np.full(len(pts), np.inf)
    bounds = np.searchsorted(table.idx, np.arange(len(pts) + 1))
    for q in range(len(pts)):
        a, b = bounds[q], bounds[q + 1]
        if b - a < 2 or table.constant[q]:
            continue
        r[q], _ = _second_distance(c, table.t[a:b], table.distance[a:b], table.kind[a:b], eps)
    with np.errstate(divide="ignore"):
        k = np.where(np.isfinite(r), 1.0 / r, 0.0)
    return k, r


def lclt_curvature(c: ParametricCurve, p, n_scan: int = DEFAULT_N_SCAN) -> LcltResult:
    """Curvature of locally convex type at ``p``.

    Local-minimum feet of the distance from ``p`` are sorted by distance;
    ``k_lct`` is the inverse of the second distance, provided the sublevel
    set at that level (plus ``1e-12`` diameters) is disconnected.

    Examples
    --------
    >>> from dividerset.curves import ellipse
    >>> round(lclt_curvature(ellipse(2, 1), (0.0, 0.0)).k_lct, 12)
    1.0
    """
    pts = np.asarray(p, dtype=float)[None, :]
    table = find_feet(c, pts, n_scan)
    mins = [f for f in _table_to_feet(c, table, range(len(table.t))) if f.kind is FootKind.LOCAL_MIN]
    r = np.inf
    used = tuple(mins)
    if not table.constant[0] and len(table.t) >= 2:
        r, sel = _second_distance(c, table.t, table.distance, table.kind, GUARD_RTOL * c.diameter)
    k = 0.0 if not np.isfinite(r) else 1.0 / r
    return LcltResult(k, float(r), used, k > 0)


def disconnection_radius_oracle(c: ParametricCurve, p, n: int = 100_000) -> float:
    """Smallest radius whose disk meets the curve in a disconnected set, by brute force.

    The distance profile is sampled on ``n`` points (wrapping for closed
    curves).  Samples are switched on in order of increasing distance while
    counting connected runs; the first level with two runs marks the birth
    of a second component.  The sampled level is then refined by bounded
    scalar minimisation of the true distance around the newborn run.
    Returns ``inf`` if no level splits the sublevel set.
    """
    if n < 1000:
        raise ValueError("the oracle needs at least 1000 samples")
    p = np.asarray(p, dtype=float)
    t = c.grid(n)
    d = np.linalg.norm(c(t) - p, axis=1)
    order = np.argsort(d, kind="stable")
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)
    idx = np.arange(n)
    if c.closed:
        left, right = np.roll(idx, 1), np.roll(idx, -1)
        has_l = has_r = np.ones(n, dtype=bool)
    else:
        left, right = np.maximum(idx - 1, 0), np.minimum(idx + 1, n - 1)
        has_l, has_r = idx > 0, idx < n - 1
    earlier = (has_l & (rank[left] < rank)).astype(int) + (has_r & (rank[right] < rank)).astype(int)
    # adding a sample opens a run when no neighbour is on yet and fuses two when both are
    comps = np.cumsum((1 - earlier)[order])
    ds = d[order]
    level_end = np.r_[ds[1:] != ds[:-1], True]
    hit = np.nonzero(level_end & (comps >= 2))[0]
    if len(hit) == 0:
        return np.inf
    k_end = hit[0]
    # the newborn component starts at the first sample that pushed the count to 2
    k_birth = np.nonzero(comps[: k_end + 1] >= 2)[0][0]
    j = order[k_birth]
    h = c.length / n if c.closed else c.length / (n - 1)
    lo, hi = t[j] - h, t[j] + h
    if not c.closed:
        lo, hi = max(lo, c.t_lo), min(hi, c.t_hi)
    res = minimize_scalar(lambda x: float(np.linalg.norm(c(x) - p)), bounds=(lo, hi),
                          method="bounded", options={"xatol": 1e-12 * c.length})
    return float(min(res.fun, ds[k_end]))


@dataclass(frozen=True)
class Raster:
    """Values on cell centres; ``values[j, i]`` sits at ``(xs[i], ys[j])``, ys ascending."""

    values: np.ndarray
    window: tuple[float, float, float, float]
    xs: np.ndarray
    ys: np.ndarray

    @property
    def resolution(self) -> tuple[int, int]:
        return len(self.xs), len(self.ys)

    @property
    def cell_area(self) -> float:
        x0, y0, x1, y1 = self.window
        return (x1 - x0) * (y1 - y0) / (len(self.xs) * len(self.ys))

    def positive_area(self) -> float:
        return float((self.values > 0).sum()) * self.cell_area


def cell_centers(window, resolution):
    x0, y0, x1, y1 = (float(v) for v in window)
    w, h = resolution
    xs = x0 + (np.arange(w) + 0.5) * (x1 - x0) / w
    ys = y0 + (np.arange(h) + 0.5) * (y1 - y0) / h
    return xs, ys


def pi_set_raster(c: ParametricCurve, window, resolution=(256, 256),
                  n_scan: int = DEFAULT_N_SCAN) -> Raster:
    """``k_lct`` sampled on the cell centres of ``window = (x0, y0, x1, y1)``.

    Cells are independent of each other; the positive cells approximate the
    open set where the curvature of locally convex type is positive.
    """
    x0, y0, x1, y1 = (float(v) for v in window)
    w, h = (int(v) for v in resolution)
    if not (x1 > x0 and y1 > y0):
        raise ValueError("window must have positive width and height")
    if w < 16 or h < 16:
        raise ValueError("resolution must be at least 16x16")
    xs, ys = cell_centers((x0, y0, x1, y1), (w, h))
    X, Y = np.meshgrid(xs, ys)
    k, _ = lclt_field(c, np.column_stack([X.ravel(), Y.ravel()]), n_scan)
    return Raster(k.reshape(h, w), (x0, y0, x1, y1), xs, ys)
