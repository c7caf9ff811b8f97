"""Contact disks and the Divider set of a plane curve.

For a curve point ``p = S(t1)`` and a side of the curve, disks tangent to
the curve at ``p`` with centres ``k(r) = p + r n`` are nested in ``r``.  The
contact disk is the largest of them that meets the curve only at ``p``; its
centre is a point of the Divider.  A curve point ``q`` lies in the closed
disk of radius ``r`` exactly when ``n . (q - p) > 0`` and

    r >= rho(q) = |q - p|**2 / (2 n . (q - p)),

so the contact radius is the infimum of ``rho`` over the rest of the curve.
Near ``p`` itself ``rho`` tends to the radius of curvature, which is why the
result equals ``min(r_curv, r_far)`` with ``r_far`` taken outside a small
window around ``t1``.

Each contact disk that touches a second point ``S(t2)`` is polished with
Newton's method on the three equations in ``(t2, x10, x20)``

    (S(t1) - k) . S'(t1) = 0
    (S(t2) - k) . S'(t2) = 0
    |S(t1) - k| = |S(t2) - k|

and both feet are then certified to be local minima of the distance.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components
from scipy.sparse import coo_matrix
from scipy.spatial import cKDTree

from .curves import ParametricCurve, Point2
from .errors import CertificationError, NoConvergenceError
from .evolute import find_cusps
from .geometry import (DEFAULT_N_SCAN, MIN, classify_stationary, find_feet,
                       find_self_intersections, left_normal, scan_for, signed_curvature)
from .lclt import lclt_field

log = logging.getLogger(__name__)

WINDOW_RTOL = 1e-3      # exclusion window around t1, fraction of the parameter interval
ZERO_RADIUS_RTOL = 1e-6  # of the diameter
JUNCTION_RTOL = 1e-6     # of the diameter
ARC_RTOL = 1e-9
CLOSURE_RTOL = 1e-4      # closure allowance in validation, of the diameter
SPLIT_FACTOR = 10.0
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def sign(self) -> float:
        return 1.0 if self is Side.LEFT else -1.0

    @classmethod
    def parse(cls, text: str) -> "Side":
        return cls(text.strip().lower())


class DividerKind(enum.Enum):
    REGULAR = "regular"
    ENDPOINT = "endpoint"
    ZERO_RADIUS = "zero"


def inward_side(c: ParametricCurve) -> Side:
    """Side facing the bounded region of a closed curve (by signed area)."""
    if not c.closed:
        raise ValueError("only closed curves have an inward side")
    p = c(c.grid(4096))
    area = 0.5 * np.sum(p[:, 0] * np.roll(p[:, 1], -1) - np.roll(p[:, 0], -1) * p[:, 1])
    return Side.LEFT if area > 0 else Side.RIGHT


def parse_sides(text: str, c: ParametricCurve) -> tuple[Side, ...]:
    key = text.strip().lower()
    if key == "both":
        return (Side.LEFT, Side.RIGHT)
    if key == "inward":
        return (inward_side(c),)
    if key == "outward":
        s = inward_side(c)
        return (Side.RIGHT if s is Side.LEFT else Side.LEFT,)
    return (Side.parse(key),)


@dataclass(frozen=True)
class ContactDisk:
    """Largest disk tangent at ``S(t1)`` on ``side`` meeting the curve only there.

    ``radius`` is ``inf`` (and ``center`` None) when the disks never touch
    the curve again.  ``t2`` is the second contact parameter when the disk
    is limited by another part of the curve, ``None`` when it is limited by
    curvature alone.
    """

    t1: float
    side: Side
    center: Point2 | None
    radius: float
    t2: float | None = None


@dataclass(frozen=True)
class DividerPoint:
    """A centre of a contact disk.

    ``residuals`` are the three defining equations at the returned point,
    scaled to length units.  ``feet`` lists every curve parameter at which
    the disk touches the curve; ``arc`` is set instead when the disk
    touches along a whole arc.  ``side`` is None for zero-radius points.
    """

    center: Point2
    radius: float
    t1: float
    t2: float
    side: Side | None
    kind: DividerKind
    residuals: tuple[float, float, float] = (0.0, 0.0, 0.0)
    feet: tuple[float, ...] = ()
    boundary: bool = False
    arc: tuple[float, float] | None = None

    @property
    def residual_max(self) -> float:
        return max(self.residuals)

    @property
    def foot_count(self) -> int:
        return len(self.feet)


# contact modes of the batched solver
_NONE, _FAR, _CURV, _CROSS, _ARC = range(5)


def _normals(c: ParametricCurve, t, side: Side):
    return side.sign * left_normal(c, t)


def _rho(dq, n):
    """``|dq|^2 / (2 n.dq)`` where ``n.dq > 0``, else inf."""
    a = (dq * dq).sum(-1)
    b = (dq * n).sum(-1)
    ok = b > 1e-14 * np.sqrt(a)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(ok, a / np.where(ok, 2 * b, 1.0), np.inf)


def _crossings(c: ParametricCurve):
    cached = getattr(c, "_crossings_cache", None)
    if cached is None:
        cached = find_self_intersections(c)
        object.__setattr__(c, "_crossings_cache", cached)
    return cached


def _crossing_partner(c: ParametricCurve, t1):
    """Other parameter of a self-intersection at ``t1``, or nan."""
    out = np.full(np.shape(t1), np.nan)
    tol = 1e-9 * c.length
    for ta, tb in _crossings(c):
        out = np.where(c.parameter_gap(t1, ta) < tol, tb, out)
        out = np.where(c.parameter_gap(t1, tb) < tol, ta, out)
    return out


def _contact_batch(c: ParametricCurve, t1, side: Side, n_scan: int):
    """Contact disks for an array of ``t1``; returns a dict of arrays."""
    t1 = np.asarray(t1, dtype=float)
    m = len(t1)
    sc = scan_for(c, n_scan)
    p = c(t1)
    n = _normals(c, t1, side)
    kappa = side.sign * signed_curvature(c, t1)
    with np.errstate(divide="ignore"):
        r_curv = np.where(kappa > 0, 1.0 / np.where(kappa > 0, kappa, 1.0), np.inf)

    w = WINDOW_RTOL * c.length
    delta = sc.t[None, :] - t1[:, None]
    if c.closed:
        delta = np.mod(delta + 0.5 * c.length, c.length) - 0.5 * c.length
    rho = _rho(sc.S[None, :, :] - p[:, None, :], n[:, None, :])
    rho = np.where(np.abs(delta) < w, np.inf, rho)
    j = np.argmin(rho, axis=1)
    rows = np.arange(m)
    r_grid = rho[rows, j]
    finite = np.isfinite(r_grid)

    # golden-section refinement of rho around the best sample, staying out of the window
    h = c.length / sc.n if c.closed else c.length / (sc.n - 1)
    dj = delta[rows, j]
    lo, hi = dj - h, dj + h
    lo = np.where(dj > 0, np.maximum(lo, w), lo)
    hi = np.where(dj < 0, np.minimum(hi, -w), hi)
    if not c.closed:
        lo = np.maximum(lo, c.t_lo - t1)
        hi = np.minimum(hi, c.t_hi - t1)

    def rho_at(d):
        return _rho(c(t1 + d) - p, n)

    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = rho_at(x1), rho_at(x2)
    for _ in range(80):
        left = f1 <= f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        x1 = hi - _GOLDEN * (hi - lo)
        x2 = lo + _GOLDEN * (hi - lo)
        f1, f2 = rho_at(x1), rho_at(x2)
    cand = np.stack([lo, hi, x1, x2, dj], axis=1)
    vals = np.stack([rho_at(lo), rho_at(hi), f1, f2, r_grid], axis=1)
    pick = np.argmin(vals, axis=1)
    d2 = cand[rows, pick]
    r_far = np.where(finite, vals[rows, pick], np.inf)
    t2 = c.wrap(t1 + d2)

    mode = np.full(m, _NONE)
    radius = np.full(m, np.inf)
    far_wins = r_far < r_curv
    mode = np.where(far_wins & np.isfinite(r_far), _FAR, mode)
    radius = np.where(far_wins, r_far, radius)
    curv_wins = ~far_wins & np.isfinite(r_curv)
    mode = np.where(curv_wins, _CURV, mode)
    radius = np.where(curv_wins, r_curv, radius)
    # a constant-distance profile: the far contact equals the osculating radius
    with np.errstate(invalid="ignore"):
        arc = np.isfinite(r_curv) & (np.abs(r_far - r_curv) <= ARC_RTOL * r_curv)
    if arc.any():
        k = p + r_curv[:, None] * n
        dist = np.linalg.norm(sc.S[None, :, :] - k[:, None, :], axis=-1)
        flat = (dist.max(1) - dist.min(1)) <= ARC_RTOL * r_curv
        arc &= flat
        if arc.any():
            far_idx = np.argmax(np.abs(delta), axis=1)
            t2 = np.where(arc, sc.t[far_idx], t2)
            mode = np.where(arc, _ARC, mode)
            radius = np.where(arc, r_curv, radius)
    partner = _crossing_partner(c, t1)
    cross = np.isfinite(partner)
    mode = np.where(cross, _CROSS, mode)
    radius = np.where(cross, 0.0, radius)
    t2 = np.where(cross, partner, t2)
    t2 = np.where(mode == _CURV, t1, t2)

    boundary = np.zeros(m, dtype=bool)
    if not c.closed:
        boundary = (mode == _FAR) & ((np.abs(t2 - c.t_lo) <= 1e-9 * c.length)
                                     | (np.abs(t2 - c.t_hi) <= 1e-9 * c.length))
        t2 = np.where(boundary, np.where(np.abs(t2 - c.t_lo) < np.abs(t2 - c.t_hi), c.t_lo, c.t_hi), t2)
    with np.errstate(invalid="ignore"):
        center = p + np.where(np.isfinite(radius), radius, 0.0)[:, None] * n
    return dict(t1=t1, t2=t2, radius=radius, center=center, mode=mode,
                boundary=boundary, normal=n, r_curv=r_curv)


def contact_radius(c: ParametricCurve, t1: float, side: Side = Side.LEFT,
                   n_scan: int = DEFAULT_N_SCAN) -> ContactDisk:
    """Supremum contact disk at ``S(t1)`` on ``side``.

    Examples
    --------
    >>> from dividerset.curves import circle
    >>> round(contact_radius(circle(1.0), 0.4, Side.LEFT).radius, 12)
    1.0
    >>> contact_radius(circle(1.0), 0.4, Side.RIGHT).radius
    inf
    """
    b = _contact_batch(c, np.array([float(t1)]), side, n_scan)
    r = float(b["radius"][0])
    if not np.isfinite(r):
        return ContactDisk(float(t1), side, None, math.inf, None)
    k = b["center"][0]
    mode = b["mode"][0]
    t2 = None if mode == _CURV else float(b["t2"][0])
    if mode == _FAR:
        t2p, kp, ok = _polish_batch(c, b["t1"][:1], b["t2"][:1], b["center"][:1], b["boundary"][:1])
        if ok[0]:
            k, t2 = kp[0], float(c.wrap(t2p[0]))
            r = float(np.linalg.norm(c(t1) - k))
    return ContactDisk(float(t1), side, Point2(float(k[0]), float(k[1])), r, t2)


def _residuals(c: ParametricCurve, t1, t2, k, boundary):
    """Scaled residuals of the three defining equations (length units)."""
    s1, s2 = c(t1), c(t2)
    d1, d2 = c.derivative(t1, 1), c.derivative(t2, 1)
    u1, u2 = s1 - k, s2 - k
    e8 = np.abs((u1 * d1).sum(-1)) / np.linalg.norm(d1, axis=-1)
    e9 = np.abs((u2 * d2).sum(-1)) / np.linalg.norm(d2, axis=-1)
    if np.any(boundary):
        # an endpoint foot only needs the distance to grow into the curve
        inward = np.where(np.abs(t2 - c.t_lo) < np.abs(t2 - c.t_hi), 1.0, -1.0)
        slope = inward * (u2 * d2).sum(-1) / np.linalg.norm(d2, axis=-1)
        e9 = np.where(boundary, np.maximum(0.0, -slope), e9)
    e10 = np.abs(np.linalg.norm(u1, axis=-1) - np.linalg.norm(u2, axis=-1))
    return np.stack([e8, e9, e10], axis=-1)


def _polish_batch(c: ParametricCurve, t1, t2, k, boundary, max_iter: int = 40):
    """Newton on ``(t2, x10, x20)`` for many seeds at once.

    Returns polished ``t2``, centres and a convergence mask.
    """
    t1 = np.asarray(t1, dtype=float)
    t2 = np.array(t2, dtype=float)
    k = np.array(k, dtype=float)
    fixed = np.asarray(boundary, dtype=bool)
    s1, d1 = c(t1), c.derivative(t1, 1)
    scale = c.diameter
    ok = np.zeros(len(t1), dtype=bool)
    for _ in range(max_iter):
        s2, da, dd = c(t2), c.derivative(t2, 1), c.derivative(t2, 2)
        u1, u2 = s1 - k, s2 - k
        F = np.stack([(u1 * d1).sum(-1), (u2 * da).sum(-1),
                      0.5 * ((u1 * u1).sum(-1) - (u2 * u2).sum(-1))], axis=-1)
        J = np.zeros((len(t1), 3, 3))
        J[:, 0, 1:] = -d1
        J[:, 1, 0] = (da * da).sum(-1) + (u2 * dd).sum(-1)
        J[:, 1, 1:] = -da
        J[:, 2, 0] = -(u2 * da).sum(-1)
        J[:, 2, 1:] = u2 - u1
        J[fixed, 1, :] = (1.0, 0.0, 0.0)
        F[fixed, 1] = 0.0
        det = np.linalg.det(J)
        good = np.abs(det) > 1e-300
        step = np.zeros_like(F)
        if good.any():
            step[good] = np.linalg.solve(J[good], -F[good][..., None])[..., 0]
        t2 = t2 + step[:, 0]
        k = k + step[:, 1:]
        small = (np.abs(step[:, 0]) <= 1e-15 * c.length) & (np.linalg.norm(step[:, 1:], axis=-1) <= 1e-15 * scale)
        ok = good & (ok | small)
        if ok.all():
            break
    res = _residuals(c, t1, t2, k, fixed)
    ok = np.isfinite(res).all(1) & (res.max(1) < 1e-10 * scale)
    return t2, k, ok


def _certify(c: ParametricCurve, t1, t2, k, boundary, radius, n_scan):
    """Both feet are local minima and the open disk holds no curve sample."""
    kind1, _ = classify_stationary(c, t1, k)
    kind2, _ = classify_stationary(c, t2, k)
    ok = (kind1 == MIN) & ((kind2 == MIN) | boundary)
    sc = scan_for(c, n_scan)
    dist = np.linalg.norm(sc.S[None, :, :] - k[:, None, :], axis=-1).min(1)
    ok &= dist >= radius - 1e-9 * c.diameter
    return ok


def newton_polish(c: ParametricCurve, seed: DividerPoint, n_scan: int = DEFAULT_N_SCAN) -> DividerPoint:
    """Solve the defining equations from ``seed`` and certify the feet.

    Raises
    ------
    NoConvergenceError
        If Newton's method does not reach residuals below ``1e-10`` diameters.
    CertificationError
        If a foot of the solution is not a local minimum of the distance.
    """
    if seed.kind is not DividerKind.REGULAR or seed.arc is not None:
        return seed
    k0 = np.array([seed.center])
    t2, k, ok = _polish_batch(c, [seed.t1], [seed.t2], k0, [seed.boundary])
    if not ok[0]:
        raise NoConvergenceError(f"Newton polish failed at t1={seed.t1:.6g}")
    r = float(np.linalg.norm(c(seed.t1) - k[0]))
    if not _certify(c, np.array([seed.t1]), t2, k, np.array([seed.boundary]), np.array([r]), n_scan)[0]:
        raise CertificationError(f"a foot at t1={seed.t1:.6g} is not a distance minimum")
    t2v = float(c.wrap(t2[0]))
    res = _residuals(c, np.array([seed.t1]), np.array([t2v]), k, np.array([seed.boundary]))[0]
    kind = DividerKind.ZERO_RADIUS if r < ZERO_RADIUS_RTOL * c.diameter else DividerKind.REGULAR
    return DividerPoint(Point2(float(k[0, 0]), float(k[0, 1])), r, seed.t1, t2v,
                        None if kind is DividerKind.ZERO_RADIUS else seed.side, kind,
                        tuple(float(v) for v in res), (seed.t1, t2v), seed.boundary)


def seed_point(c: ParametricCurve, disk: ContactDisk) -> DividerPoint:
    """Unpolished divider point from a contact disk (Regular unless limited by curvature)."""
    if not math.isfinite(disk.radius):
        raise ValueError("the contact disk is unbounded")
    kind = DividerKind.ENDPOINT if disk.t2 is None else DividerKind.REGULAR
    t2 = disk.t1 if disk.t2 is None else disk.t2
    boundary = (not c.closed) and disk.t2 is not None and min(abs(t2 - c.t_lo), abs(t2 - c.t_hi)) <= 1e-9 * c.length
    return DividerPoint(disk.center, disk.radius, disk.t1, t2, disk.side, kind,
                        boundary=boundary)


@dataclass
class DividerTrace:
    """Result of :func:`divider_trace`."""

    curve: ParametricCurve
    points: list[DividerPoint]
    polylines: list[np.ndarray]
    gaps: list[tuple[float, str, str]] = field(default_factory=list)
    truncated: int = 0
    unbounded: int = 0

    def centers(self, kinds=None) -> np.ndarray:
        pts = [p.center for p in self.points if kinds is None or p.kind in kinds]
        return np.array(pts, dtype=float).reshape(-1, 2)

    def of_kind(self, kind: DividerKind) -> list[DividerPoint]:
        return [p for p in self.points if p.kind is kind]


def _trace_parameters(c: ParametricCurve, n_grid: int) -> np.ndarray:
    m = int(c.symmetry.get("rotation_order", 1) or 1)
    n = int(math.ceil(n_grid / m) * m)
    extra = [cp.t for cp in find_cusps(c)]
    for ta, tb in _crossings(c):
        extra += [ta, tb]
    t = np.concatenate([c.grid(n), np.asarray(extra, dtype=float)])
    t = np.sort(c.wrap(t))
    keep = np.r_[True, np.diff(t) > 1e-9 * c.length]
    return t[keep]


def divider_trace(c: ParametricCurve, n_grid: int = 1024, sides=None,
                  n_scan: int = DEFAULT_N_SCAN, r_max: float | None = None) -> DividerTrace:
    """Trace the Divider by sweeping ``t1`` over the curve.

    Parameters
    ----------
    n_grid : int
        Uniform ``t1`` samples (rounded up to a multiple of the preset's
        rotational symmetry order); vertices and self-intersection
        parameters are always added.
    sides : iterable of Side, optional
        Both sides by default.
    r_max : float, optional
        Contact disks larger than this are dropped; ten diameters by default.

    Returns
    -------
    DividerTrace
        Points in ``t1`` order per side, polylines of consecutive points, and
        the samples that failed (``gaps``).
    """
    if n_grid < 128:
        raise ValueError("n_grid must be at least 128")
    sides = (Side.LEFT, Side.RIGHT) if sides is None else tuple(sides)
    r_max = 10.0 * c.diameter if r_max is None else float(r_max)
    t1 = _trace_parameters(c, n_grid)
    diam = c.diameter
    points: list[DividerPoint] = []
    runs: list[list[int]] = []
    gaps = []
    truncated = unbounded = 0

    for side in sides:
        b = _contact_batch(c, t1, side, n_scan)
        mode, radius = b["mode"], b["radius"]
        unbounded += int((mode == _NONE).sum())
        big = (radius > r_max) & (mode != _NONE)
        truncated += int(big.sum())
        live = (mode != _NONE) & ~big
        far = live & (mode == _FAR)
        pol_t2 = b["t2"].copy()
        pol_k = b["center"].copy()
        good = live.copy()
        if far.any():
            t2p, kp, conv = _polish_batch(c, t1[far], b["t2"][far], b["center"][far], b["boundary"][far])
            rp = np.linalg.norm(c(t1[far]) - kp, axis=-1)
            cert = _certify(c, t1[far], t2p, kp, b["boundary"][far], rp, n_scan)
            ok = conv & cert
            pol_t2[far], pol_k[far] = c.wrap(t2p), kp
            idx = np.nonzero(far)[0]
            good[idx[~ok]] = False
            for i, cv in zip(idx[~ok], conv[~ok]):
                gaps.append((float(t1[i]), side.value, "no-convergence" if not cv else "certification"))
        res = np.zeros((len(t1), 3))
        if far.any():
            res[far] = _residuals(c, t1[far], pol_t2[far], pol_k[far], b["boundary"][far])
        arcm = good & (mode == _ARC)
        if arcm.any():
            res[arcm] = _residuals(c, t1[arcm], pol_t2[arcm], pol_k[arcm], np.zeros(arcm.sum(), bool))

        side_runs: list[list[int]] = []
        run: list[int] = []
        for i in range(len(t1)):
            if not good[i]:
                if run:
                    side_runs.append(run)
                    run = []
                continue
            md = mode[i]
            k = pol_k[i]
            if md == _CROSS:
                s = c(t1[i])
                pt = DividerPoint(Point2(float(s[0]), float(s[1])), 0.0, float(t1[i]), float(pol_t2[i]),
                                  None, DividerKind.ZERO_RADIUS, (0.0, 0.0, 0.0),
                                  (float(t1[i]), float(pol_t2[i])))
            else:
                r = float(np.linalg.norm(c(t1[i]) - k)) if md == _FAR else float(radius[i])
                if md == _CURV:
                    kind = DividerKind.ENDPOINT
                elif r < ZERO_RADIUS_RTOL * diam:
                    kind = DividerKind.ZERO_RADIUS
                else:
                    kind = DividerKind.REGULAR
                pt = DividerPoint(Point2(float(k[0]), float(k[1])), r, float(t1[i]),
                                  float(pol_t2[i]), None if kind is DividerKind.ZERO_RADIUS else side,
                                  kind, tuple(float(v) for v in res[i]),
                                  (float(t1[i]),) if md == _CURV else (float(t1[i]), float(pol_t2[i])),
                                  bool(b["boundary"][i]),
                                  (c.t_lo, c.t_hi) if md == _ARC else None)
            run.append(len(points))
            points.append(pt)
        if run:
            side_runs.append(run)
        if c.closed and len(side_runs) >= 2 and good[0] and good[-1]:
            # the sweep wraps around the seam: the last run continues into the first
            side_runs[0] = side_runs.pop() + side_runs[0]
        runs.extend(side_runs)

    points, runs = _merge_coincident(c, points, runs)
    _record_feet(c, points, n_scan)
    polylines = _polylines(c, points, runs)
    return DividerTrace(c, points, polylines, gaps, truncated, unbounded)


def _merge_coincident(c: ParametricCurve, points, runs):
    """Collapse clusters of equal centres that form junctions or zero-radius points.

    Centres closer than ``1e-6`` diameters are clustered.  A cluster is
    replaced by one point when it is made of zero-radius points or when the
    union of its feet holds three or more distinct parameters.  Endpoints
    never merge.
    """
    if len(points) < 2:
        return points, runs
    xy = np.array([p.center for p in points])
    tol = JUNCTION_RTOL * c.diameter
    pairs = cKDTree(xy).query_pairs(tol, output_type="ndarray")
    if len(pairs) == 0:
        return points, runs
    g = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(len(points),) * 2)
    _, label = connected_components(g, directed=False)
    replace = {}
    for lab in np.unique(label):
        members = np.nonzero(label == lab)[0]
        members = np.array([i for i in members if points[i].kind is not DividerKind.ENDPOINT])
        if len(members) < 2:
            continue
        group = [points[i] for i in members]
        feet = _distinct(c, [t for p in group for t in p.feet])
        zero = all(p.kind is DividerKind.ZERO_RADIUS for p in group)
        arc = any(p.arc is not None for p in group)
        if not (zero or arc or len(feet) >= 3):
            continue
        keep = members[0]
        base = points[keep]
        worst = tuple(max(p.residuals[q] for p in group) for q in range(3))
        points[keep] = DividerPoint(base.center, base.radius, base.t1, base.t2, base.side, base.kind,
                                    worst, tuple(feet), base.boundary, base.arc)
        for i in members[1:]:
            replace[i] = keep
    if not replace:
        return points, runs
    new_index = {}
    out = []
    for i, p in enumerate(points):
        if i not in replace:
            new_index[i] = len(out)
            out.append(p)
    new_runs = []
    for run in runs:
        mapped = []
        for i in run:
            j = new_index[replace.get(i, i)]
            if not mapped or mapped[-1] != j:
                mapped.append(j)
        new_runs.append(mapped)
    return out, new_runs


def _distinct(c: ParametricCurve, ts, tol_rel: float = 1e-6):
    tol = tol_rel * c.length
    out = []
    for t in np.sort(np.asarray(ts, dtype=float)):
        # sorted input: only the last kept value (and the first, across the seam) can be close
        if out and (t - out[-1] <= tol or (c.closed and out[0] + c.length - t <= tol)):
            continue
        out.append(float(t))
    return out


def _record_feet(c: ParametricCurve, points, n_scan):
    """Replace each point's feet by every distance-minimising foot of its disk."""
    idx = [i for i, p in enumerate(points) if p.arc is None and p.kind is not DividerKind.ZERO_RADIUS]
    if not idx:
        return
    table = find_feet(c, np.array([points[i].center for i in idx]), n_scan)
    tol = 1e-7 * c.diameter
    bounds = np.searchsorted(table.idx, np.arange(len(idx) + 1))
    for q, i in enumerate(idx):
        a, b = bounds[q], bounds[q + 1]
        p = points[i]
        sel = (table.kind[a:b] == MIN) & (table.distance[a:b] <= p.radius + tol)
        feet = _distinct(c, list(table.t[a:b][sel]) + list(p.feet))
        points[i] = DividerPoint(p.center, p.radius, p.t1, p.t2, p.side, p.kind, p.residuals,
                                 tuple(feet), p.boundary, p.arc)


def _polylines(c: ParametricCurve, points, runs):
    """Split runs of consecutive points where the centre jumps too far."""
    lines = []
    for run in runs:
        if not run:
            continue
        xy = np.array([points[i].center for i in run])
        if len(xy) == 1:
            lines.append(xy)
            continue
        jump = np.linalg.norm(np.diff(xy, axis=0), axis=1)
        split = np.zeros(len(jump), dtype=bool)
        floor = 1e-9 * c.diameter
        for q in range(len(jump)):
            nb = np.r_[jump[max(0, q - 4):q], jump[q + 1:q + 5]]
            local = np.median(nb) if len(nb) else jump[q]
            split[q] = jump[q] > SPLIT_FACTOR * max(local, floor)
        start = 0
        for q in np.nonzero(split)[0]:
            lines.append(xy[start:q + 1])
            start = q + 1
        lines.append(xy[start:])
    return lines


@dataclass
class ValidationReport:
    """Outcome of checking divider points against the positive-curvature region."""

    checked: int
    exempt: int
    closure_only: int
    violations: list[tuple[int, Point2]]

    @property
    def ok(self) -> bool:
        return not self.violations


def divider_validate(points, c: ParametricCurve, n_scan: int = DEFAULT_N_SCAN) -> ValidationReport:
    """Check that Regular and Endpoint centres lie in the closure of ``{k_lct > 0}``.

    A centre passes if ``k_lct > 0`` there or at one of eight points at
    ``1e-4`` diameters around it.  Zero-radius points and arc contacts (the
    centre of a circle) are exempt.
    """
    idx = [i for i, p in enumerate(points)
           if p.kind is not DividerKind.ZERO_RADIUS and p.arc is None]
    exempt = len(points) - len(idx)
    if not idx:
        return ValidationReport(0, exempt, 0, [])
    xy = np.array([points[i].center for i in idx])
    k, _ = lclt_field(c, xy, n_scan)
    fail = np.nonzero(k <= 0)[0]
    closure = 0
    violations = []
    if len(fail):
        ang = np.arange(8) * np.pi / 4
        ring = CLOSURE_RTOL * c.diameter * np.column_stack([np.cos(ang), np.sin(ang)])
        probes = (xy[fail][:, None, :] + ring[None]).reshape(-1, 2)
        kp, _ = lclt_field(c, probes, n_scan)
        near = (kp.reshape(len(fail), 8) > 0).any(1)
        closure = int(near.sum())
        violations = [(idx[f], points[idx[f]].center) for f in fail[~near]]
    return ValidationReport(len(idx), exempt, closure, violations)


def _segment_distances(pts, segs):
    """Distance from each point to the nearest of the given segments ``(m, 2, 2)``."""
    out = np.full(len(pts), np.inf)
    if len(segs) == 0 or len(pts) == 0:
        return out
    a, b = segs[:, 0], segs[:, 1]
    ab = b - a
    L2 = np.maximum((ab * ab).sum(-1), 1e-300)
    for s in range(0, len(pts), 512):
        P = pts[s:s + 512, None, :]
        u = np.clip(((P - a) * ab).sum(-1) / L2, 0.0, 1.0)
        d = np.linalg.norm(P - (a + u[..., None] * ab), axis=-1)
        out[s:s + 512] = d.min(1)
    return out


def _as_segments(lines):
    segs = []
    for ln in lines:
        ln = np.asarray(ln, dtype=float).reshape(-1, 2)
        if len(ln) == 1:
            segs.append(np.stack([ln, ln], axis=1))
        else:
            segs.append(np.stack([ln[:-1], ln[1:]], axis=1))
    return np.concatenate(segs) if segs else np.zeros((0, 2, 2))


def hausdorff_distance(a_lines, b_lines) -> float:
    """Hausdorff distance between two unions of polylines, measured from vertices.

    A single point is a one-vertex polyline.
    """
    a_pts = np.concatenate([np.asarray(x, dtype=float).reshape(-1, 2) for x in a_lines])
    b_pts = np.concatenate([np.asarray(x, dtype=float).reshape(-1, 2) for x in b_lines])
    ab = _segment_distances(a_pts, _as_segments(b_lines)).max()
    ba = _segment_distances(b_pts, _as_segments(a_lines)).max()
    return float(max(ab, ba))
