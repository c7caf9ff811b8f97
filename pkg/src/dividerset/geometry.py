"""Metrics, curvature and the feet of perpendiculars from a point to a curve.

A *foot* of a query point ``p`` on a curve ``S`` is a stationary point of
``t -> |S(t) - p|``, i.e. a root of the orthogonality residual
``(S(t) - p) . S'(t)``.  Feet are classified as local minima or maxima of the
distance by the sign of the lowest non-vanishing derivative of
``D(t) = |S(t) - p|^2 / 2``.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

import numpy as np

from .curves import ParametricCurve, Point2
from .errors import NoConvergenceError, OutOfDomainError, SingularParameterizationError
from .roots import bracketed_newton

log = logging.getLogger(__name__)

DEFAULT_N_SCAN = 2048
CONSTANT_PROFILE_RTOL = 1e-9
MERGE_RTOL = 1e-6  # fraction of the parameter interval
DEGENERACY_RTOL = 1e-9
# A triple root of the residual is only located to ~eps**(1/3), so the third
# derivative at a computed cusp-type foot is ~1e-5 of its scale, not zero.
ODD_ORDER_RTOL = 1e-4


class MetricKind(enum.Enum):
    EUCLIDEAN = "euclid"
    MAX_COORDINATE = "maxcoord"
    ADDITION = "add"

    @classmethod
    def parse(cls, text: str) -> "MetricKind":
        aliases = {"euclidean": cls.EUCLIDEAN, "chebyshev": cls.MAX_COORDINATE,
                   "max": cls.MAX_COORDINATE, "manhattan": cls.ADDITION, "l1": cls.ADDITION}
        key = text.strip().lower()
        if key in aliases:
            return aliases[key]
        return cls(key)


class FootKind(enum.Enum):
    LOCAL_MIN = "min"
    LOCAL_MAX = "max"
    DEGENERATE = "degenerate"


_KIND_CODES = (FootKind.LOCAL_MIN, FootKind.LOCAL_MAX, FootKind.DEGENERATE)
MIN, MAX, DEG = 0, 1, 2


@dataclass(frozen=True)
class Foot:
    """A stationary point of the distance from a query point to the curve.

    ``order`` is the derivative order that decided ``kind``: 2 or 4 for
    interior feet, 1 for one-sided endpoint minima, 0 when every derivative
    up to order four vanished (arc contact).  ``arc`` is the parameter
    interval of a constant-distance profile, otherwise None.
    """

    t: float
    point: Point2
    distance: float
    kind: FootKind
    order: int = 2
    boundary: bool = False
    arc: tuple[float, float] | None = None


def metric_distance(a, b, m: MetricKind = MetricKind.EUCLIDEAN):
    """Distance between points (or broadcast arrays of points) under ``m``."""
    d = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    if m is MetricKind.EUCLIDEAN:
        out = np.hypot(d[..., 0], d[..., 1])
    elif m is MetricKind.MAX_COORDINATE:
        out = np.maximum(d[..., 0], d[..., 1])
    elif m is MetricKind.ADDITION:
        out = d[..., 0] + d[..., 1]
    else:
        raise ValueError(f"unknown metric {m!r}")
    return float(out) if np.ndim(out) == 0 else out


def _cross(u, v):
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def _dot(u, v):
    return (u * v).sum(-1)


def signed_curvature(c: ParametricCurve, t, *, tol: float = 1e-12):
    """Signed curvature; positive when the curve turns toward its left normal.

    Raises
    ------
    SingularParameterizationError
        If the speed is below ``tol`` times the curve diameter.
    """
    t_arr = np.asarray(t, dtype=float)
    d1 = c.derivative(t_arr, 1)
    d2 = c.derivative(t_arr, 2)
    speed = np.linalg.norm(d1, axis=-1)
    if np.any(speed <= tol * max(c.diameter, 1.0)):
        raise SingularParameterizationError("curve speed vanishes; curvature undefined")
    k = _cross(d1, d2) / speed**3
    return float(k) if t_arr.ndim == 0 else k


def curvature_derivative(c: ParametricCurve, t):
    """Parameter derivative of the signed curvature."""
    t_arr = np.asarray(t, dtype=float)
    d1 = c.derivative(t_arr, 1)
    d2 = c.derivative(t_arr, 2)
    d3 = c.derivative(t_arr, 3)
    s2 = _dot(d1, d1)
    s = np.sqrt(s2)
    dk = _cross(d1, d3) / s**3 - 3 * _cross(d1, d2) * _dot(d1, d2) / s**5
    return float(dk) if t_arr.ndim == 0 else dk


def left_normal(c: ParametricCurve, t):
    d1 = c.derivative(np.asarray(t, dtype=float), 1)
    n = np.stack([-d1[..., 1], d1[..., 0]], axis=-1)
    return n / np.linalg.norm(n, axis=-1, keepdims=True)


def distance_derivatives(c: ParametricCurve, t, p):
    """Derivatives 1..4 of ``D(t) = |S(t) - p|^2 / 2`` and their magnitude scales.

    Returns two arrays of shape ``(..., 4)``; the scales are sums of the
    absolute values of the terms, used to judge when a derivative is zero.
    """
    t = np.asarray(t, dtype=float)
    s = c(t) - np.asarray(p, dtype=float)
    d1, d2, d3, d4 = (c.derivative(t, k) for k in range(1, 5))
    n1, n2, n3, n4 = (np.linalg.norm(v, axis=-1) for v in (d1, d2, d3, d4))
    ns = np.linalg.norm(s, axis=-1)
    vals = np.stack([
        _dot(s, d1),
        _dot(d1, d1) + _dot(s, d2),
        3 * _dot(d1, d2) + _dot(s, d3),
        3 * _dot(d2, d2) + 4 * _dot(d1, d3) + _dot(s, d4),
    ], axis=-1)
    scales = np.stack([
        ns * n1,
        n1 * n1 + ns * n2,
        3 * n1 * n2 + ns * n3,
        3 * n2 * n2 + 4 * n1 * n3 + ns * n4,
    ], axis=-1)
    return vals, scales


def classify_stationary(c: ParametricCurve, t, p, rtol: float = DEGENERACY_RTOL):
    """Classify stationary points of the distance by the lowest non-zero derivative.

    Returns integer kind codes (0 min, 1 max, 2 degenerate) and the deciding
    order (2, 3 or 4; 0 if all vanish).
    """
    vals, scales = distance_derivatives(c, t, p)
    tiny = 1e-300
    rt = np.array([rtol, rtol, max(rtol, ODD_ORDER_RTOL), rtol])
    nz = np.abs(vals) > rt * scales + tiny
    kind = np.full(np.shape(t), DEG, dtype=int)
    order = np.zeros(np.shape(t), dtype=int)
    undecided = np.ones(np.shape(t), dtype=bool)
    for col, k in ((1, 2), (2, 3), (3, 4)):
        sel = undecided & nz[..., col]
        if k % 2 == 0:
            kind = np.where(sel, np.where(vals[..., col] > 0, MIN, MAX), kind)
        else:
            kind = np.where(sel, DEG, kind)
        order = np.where(sel, k, order)
        undecided &= ~sel
    return kind, order


class _Scan:
    """Curve samples reused across many query points."""

    def __init__(self, c: ParametricCurve, n: int):
        if n < 64:
            raise ValueError("n_scan must be at least 64")
        self.curve = c
        self.n = n
        self.t = c.grid(n)
        self.S = c(self.t)
        self.S1 = c.derivative(self.t, 1)
        if c.closed:
            self.t_next = np.append(self.t[1:], c.t_hi)
        else:
            self.t_next = self.t[1:]


_SCAN_CACHE: dict = {}


def scan_for(c: ParametricCurve, n: int) -> _Scan:
    key = (id(c), n)
    hit = _SCAN_CACHE.get(key)
    if hit is None or hit.curve is not c:
        if len(_SCAN_CACHE) > 64:
            _SCAN_CACHE.clear()
        hit = _SCAN_CACHE[key] = _Scan(c, n)
    return hit


@dataclass
class FeetTable:
    """Feet of many query points in flat arrays; ``idx`` is the query index."""

    idx: np.ndarray
    t: np.ndarray
    distance: np.ndarray
    kind: np.ndarray
    order: np.ndarray
    boundary: np.ndarray
    constant: np.ndarray  # per query: constant-distance profile
    dropped: int = 0

    def for_point(self, i: int) -> np.ndarray:
        return np.nonzero(self.idx == i)[0]


def find_feet(c: ParametricCurve, points, n_scan: int = DEFAULT_N_SCAN,
              chunk: int = 256) -> FeetTable:
    """All feet of perpendiculars from each query point.

    The orthogonality residual is scanned on ``n_scan`` samples, every sign
    change is refined by safeguarded Newton iteration, feet closer than
    ``1e-6`` of the parameter interval are merged keeping the nearer one.
    Endpoints of open curves are added when they are one-sided minima of the
    distance.  A query whose distance profile is constant (the centre of a
    circle) gets a single degenerate foot covering the whole curve.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    sc = scan_for(c, n_scan)
    parts = []
    constant = np.zeros(len(pts), dtype=bool)
    dropped = 0
    for start in range(0, len(pts), chunk):
        block = pts[start:start + chunk]
        out, const, nd = _feet_block(c, sc, block)
        out["idx"] += start
        parts.append(out)
        constant[start:start + len(block)] = const
        dropped += nd
    cat = {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}
    # sort by query, then distance
    order = np.lexsort((cat["distance"], cat["idx"]))
    cat = {k: v[order] for k, v in cat.items()}
    if dropped:
        log.warning("dropped %d foot candidates that failed to converge", dropped)
    return FeetTable(cat["idx"], cat["t"], cat["distance"], cat["kind"], cat["order"],
                     cat["boundary"], constant, dropped)


def _feet_block(c: ParametricCurve, sc: _Scan, P: np.ndarray):
    m = len(P)
    diff = sc.S[None, :, :] - P[:, None, :]
    R = (diff * sc.S1[None]).sum(-1)
    D = np.sqrt((diff * diff).sum(-1))
    dmax, dmin, dmean = D.max(1), D.min(1), D.mean(1)
    const = (dmax - dmin) <= CONSTANT_PROFILE_RTOL * dmean

    # brackets between consecutive samples with a strict sign change, plus exact zeros
    if c.closed:
        Rn = np.roll(R, -1, axis=1)
        lo_t = np.broadcast_to(sc.t, R.shape)
        hi_t = np.broadcast_to(sc.t_next, R.shape)
    else:
        Rn = R[:, 1:]
        R = R[:, :-1]
        lo_t = np.broadcast_to(sc.t[:-1], R.shape)
        hi_t = np.broadcast_to(sc.t_next, R.shape)
    change = (R * Rn < 0) | (R == 0)
    if not c.closed:
        last_zero = np.zeros_like(change)
        last_zero[:, -1] = Rn[:, -1] == 0
    change &= ~const[:, None]
    qi, si = np.nonzero(change)
    lo = lo_t[qi, si].copy()
    hi = np.where(R[qi, si] == 0, lo, hi_t[qi, si])
    if not c.closed:
        zi, zs = np.nonzero(last_zero & ~const[:, None])
        qi = np.concatenate([qi, zi])
        t_end = hi_t[zi, zs]
        lo = np.concatenate([lo, t_end])
        hi = np.concatenate([hi, t_end])
    Pq = P[qi]

    def fdf(t):
        s = c(t) - Pq
        d1 = c.derivative(t, 1)
        d2 = c.derivative(t, 2)
        return (s * d1).sum(-1), (d1 * d1).sum(-1) + (s * d2).sum(-1)

    t, ok = bracketed_newton(fdf, lo, hi, xtol=1e-13 * max(c.length, 1.0))
    nd = int((~ok).sum())
    qi, t = qi[ok], t[ok]
    t = c.wrap(t)
    kind, order = classify_stationary(c, t, P[qi])
    dist = np.linalg.norm(c(t) - P[qi], axis=-1)
    boundary = np.zeros(len(t), dtype=bool)

    if not c.closed:
        ends = []
        for t_end, inward in ((c.t_lo, 1.0), (c.t_hi, -1.0)):
            s = c(t_end) - P
            r = (s * c.derivative(np.full(m, t_end), 1)).sum(-1)
            is_min = (inward * r > 0) & ~const
            q = np.nonzero(is_min)[0]
            ends.append((q, np.full(len(q), t_end), np.linalg.norm(s[q], axis=-1)))
        for q, te, de in ends:
            qi = np.concatenate([qi, q])
            t = np.concatenate([t, te])
            dist = np.concatenate([dist, de])
            kind = np.concatenate([kind, np.full(len(q), MIN)])
            order = np.concatenate([order, np.ones(len(q), dtype=int)])
            boundary = np.concatenate([boundary, np.ones(len(q), dtype=bool)])

    # constant profiles: one degenerate foot spanning the curve
    cq = np.nonzero(const)[0]
    qi = np.concatenate([qi, cq])
    t = np.concatenate([t, np.full(len(cq), c.t_lo)])
    dist = np.concatenate([dist, dmean[cq]])
    kind = np.concatenate([kind, np.full(len(cq), DEG)])
    order = np.concatenate([order, np.zeros(len(cq), dtype=int)])
    boundary = np.concatenate([boundary, np.zeros(len(cq), dtype=bool)])

    out = dict(idx=qi, t=t, distance=dist, kind=kind, order=order, boundary=boundary)
    out = _merge_close(c, out)
    return out, const, nd


def _merge_close(c: ParametricCurve, f: dict) -> dict:
    """Merge feet of the same query closer than the parameter tolerance."""
    if len(f["t"]) < 2:
        return f
    tol = MERGE_RTOL * c.length
    order = np.lexsort((f["t"], f["idx"]))
    f = {k: v[order] for k, v in f.items()}

    def better(a, b):
        # interior roots win over one-sided endpoint records, then the nearer foot
        if f["boundary"][a] != f["boundary"][b]:
            return b if f["boundary"][a] else a
        return a if f["distance"][a] <= f["distance"][b] else b

    keep = np.ones(len(f["t"]), dtype=bool)
    first = {}
    last = None
    for i in range(len(f["t"])):
        q = f["idx"][i]
        if last is not None and f["idx"][last] == q and f["t"][i] - f["t"][last] < tol:
            win = better(last, i)
            keep[i if win == last else last] = False
            last = win
            continue
        first.setdefault(q, i)
        last = i
    if c.closed:
        kept = np.nonzero(keep)[0]
        for q in np.unique(f["idx"][kept]):
            rows = kept[f["idx"][kept] == q]
            if len(rows) > 1 and f["t"][rows[0]] + c.length - f["t"][rows[-1]] < tol:
                win = better(rows[0], rows[-1])
                keep[rows[-1] if win == rows[0] else rows[0]] = False
    return {k: v[keep] for k, v in f.items()}


def _table_to_feet(c: ParametricCurve, table: FeetTable, rows) -> list[Foot]:
    feet = []
    for j in rows:
        t = float(table.t[j])
        arc = (c.t_lo, c.t_hi) if table.constant[table.idx[j]] and table.kind[j] == DEG else None
        pt = c(t)
        feet.append(Foot(t, Point2(float(pt[0]), float(pt[1])), float(table.distance[j]),
                         _KIND_CODES[table.kind[j]], int(table.order[j]),
                         bool(table.boundary[j]), arc))
    return feet


def all_feet(c: ParametricCurve, p, n_scan: int = DEFAULT_N_SCAN) -> list[Foot]:
    """Every foot of a perpendicular from ``p`` to ``c``, sorted by distance."""
    table = find_feet(c, np.asarray(p, dtype=float)[None, :], n_scan)
    return _table_to_feet(c, table, range(len(table.t)))


def foot_refine(c: ParametricCurve, p, t_seed: float, *, max_iter: int = 60,
                n_probe: int = 256) -> Foot:
    """Refine a single foot of the perpendicular from ``p`` near ``t_seed``.

    A sign-change bracket of the orthogonality residual is grown outward from
    the seed, then refined by safeguarded Newton iteration.

    Raises
    ------
    OutOfDomainError
        No bracket exists before the ends of an open curve.
    NoConvergenceError
        The iteration budget ran out.
    """
    p = np.asarray(p, dtype=float)
    probe = c(c.grid(n_probe))
    dd = np.linalg.norm(probe - p, axis=-1)
    if dd.max() - dd.min() <= CONSTANT_PROFILE_RTOL * dd.mean():
        pt = c(t_seed)
        return Foot(float(t_seed), Point2(*map(float, pt)), float(dd.mean()),
                    FootKind.DEGENERATE, 0, False, (c.t_lo, c.t_hi))

    def resid(t):
        s = c(t) - p
        return float(_dot(s, c.derivative(t, 1)))

    step = c.length / 4096
    r0 = resid(t_seed)
    lo = hi = float(t_seed)
    if r0 != 0:
        found = False
        for k in range(1, 4097):
            for cand in (t_seed - k * step, t_seed + k * step):
                if not c.closed and not (c.t_lo <= cand <= c.t_hi):
                    continue
                if resid(cand) * r0 <= 0:
                    # bracket between the seed side and the candidate
                    prev = cand + step if cand < t_seed else cand - step
                    lo, hi = min(prev, cand), max(prev, cand)
                    found = True
                    break
            if found:
                break
            if not c.closed and t_seed - k * step < c.t_lo and t_seed + k * step > c.t_hi:
                break
        if not found:
            raise OutOfDomainError(f"no foot of the perpendicular near t={t_seed:g}")

    def fdf(t):
        s = c(t) - p
        d1 = c.derivative(t, 1)
        d2 = c.derivative(t, 2)
        return (s * d1).sum(-1), (d1 * d1).sum(-1) + (s * d2).sum(-1)

    t, ok = bracketed_newton(fdf, np.array([lo]), np.array([hi]),
                             xtol=1e-13 * max(c.length, 1.0), max_iter=max_iter)
    if not ok[0]:
        raise NoConvergenceError(f"foot refinement did not converge from t={t_seed:g}")
    t = float(c.wrap(t[0]))
    kind, order = classify_stationary(c, np.array([t]), p)
    pt = c(t)
    return Foot(t, Point2(float(pt[0]), float(pt[1])), float(np.linalg.norm(pt - p)),
                _KIND_CODES[kind[0]], int(order[0]))


def find_self_intersections(c: ParametricCurve, n: int = 2048, tol: float = 1e-13):
    """Parameter pairs ``(ta, tb)``, ``ta < tb``, with ``S(ta) == S(tb)``.

    Crossings of the sampled polyline are located by brute-force segment
    tests and refined with a two-variable Newton iteration.
    """
    t = c.grid(n)
    P = c(t)
    if c.closed:
        t_next = np.append(t[1:], c.t_hi)
        Q = np.roll(P, -1, axis=0)
    else:
        t, t_next, Q, P = t[:-1], t[1:], P[1:], P[:-1]
    m = len(P)
    E = Q - P
    seeds = []
    for i in range(m):
        j = np.arange(i + 2, m)
        if c.closed and i == 0:
            j = j[j != m - 1]
        if len(j) == 0:
            continue
        den = _cross(E[i], E[j])
        w = P[j] - P[i]
        with np.errstate(divide="ignore", invalid="ignore"):
            s = _cross(w, E[j]) / den
            u = _cross(w, E[i]) / den
        hit = (den != 0) & (s >= 0) & (s < 1) & (u >= 0) & (u < 1)
        for k in np.nonzero(hit)[0]:
            jj = j[k]
            seeds.append((t[i] + s[k] * (t_next[i] - t[i]), t[jj] + u[k] * (t_next[jj] - t[jj])))
    out = []
    for ta, tb in seeds:
        x = np.array([ta, tb])
        for _ in range(50):
            F = c(x[0]) - c(x[1])
            J = np.column_stack([c.derivative(x[0], 1), -c.derivative(x[1], 1)])
            try:
                dx = np.linalg.solve(J, -F)
            except np.linalg.LinAlgError:
                break
            x = x + dx
            if np.abs(dx).max() < tol * max(c.length, 1.0):
                break
        x = np.sort(c.wrap(x))
        if np.linalg.norm(c(x[0]) - c(x[1])) > 1e-9 * c.diameter:
            continue
        if c.parameter_gap(x[0], x[1]) < MERGE_RTOL * c.length:
            continue
        if any(c.parameter_gap(x[0], a) + c.parameter_gap(x[1], b) < 1e-7 * c.length
               for a, b in out):
            continue
        out.append((float(x[0]), float(x[1])))
    return sorted(out)
