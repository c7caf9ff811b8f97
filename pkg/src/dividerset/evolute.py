"""Evolutes, vertices and osculating circles.

The evolute of ``S`` is the locus of centres of curvature
``E(t) = S(t) + N(t) / kappa(t)`` with ``N`` the unit left normal and
``kappa`` the signed curvature.  Its cusps sit over the vertices of ``S``,
the parameters where ``kappa'`` vanishes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .curves import ParametricCurve, Point2
from .errors import ZeroCurvatureError
from .geometry import DEFAULT_N_SCAN, curvature_derivative, left_normal, signed_curvature
from .roots import bisect

ZERO_CURVATURE_RTOL = 1e-9
VERTEX_RTOL = 1e-7


class CuspKind(enum.Enum):
    MAX_CURVATURE = "max"
    MIN_CURVATURE = "min"


class ContactOrder(enum.Enum):
    SECOND = 2
    THIRD_OR_HIGHER = 3


@dataclass(frozen=True)
class EvoluteCusp:
    """A vertex of the curve and the matching cusp of its evolute."""

    t: float
    center: Point2
    radius: float
    kind: CuspKind


def evolute_point(c: ParametricCurve, t):
    """Centre of the osculating circle at ``t``.

    Raises
    ------
    ZeroCurvatureError
        When ``|kappa| < 1e-9 / diameter`` (the centre is at infinity).
    """
    t_arr = np.asarray(t, dtype=float)
    k = np.asarray(signed_curvature(c, t_arr))
    if np.any(np.abs(k) < ZERO_CURVATURE_RTOL / c.diameter):
        raise ZeroCurvatureError("curvature vanishes; the evolute point is at infinity")
    e = c(t_arr) + left_normal(c, t_arr) / k[..., None]
    if t_arr.ndim == 0:
        return Point2(float(e[0]), float(e[1]))
    return e


def evolute_polyline(c: ParametricCurve, n: int = 2048, clip: float | None = None):
    """Sampled evolute with ``nan`` rows where it runs off to infinity.

    Points farther than ``clip`` (default ten diameters) from the curve's
    first sample are also blanked so plots stay bounded.
    """
    t = c.grid(n)
    if c.closed:
        t = np.append(t, c.t_hi)
    k = signed_curvature(c, t)
    with np.errstate(divide="ignore", invalid="ignore"):
        e = c(t) + left_normal(c, t) / k[:, None]
    clip = 10.0 * c.diameter if clip is None else clip
    far = ~np.isfinite(e).all(1) | (np.abs(k) < ZERO_CURVATURE_RTOL / c.diameter)
    far |= np.linalg.norm(e - c(t), axis=1) > clip
    e[far] = np.nan
    return e


def _kappa_prime_scale(c: ParametricCurve, t):
    # |kappa'| is compared against |S'| / diameter**2, which makes the test
    # dimensionless in both length and parameter units
    speed = np.linalg.norm(c.derivative(t, 1), axis=-1)
    return speed / c.diameter**2


def osculating_contact_order(c: ParametricCurve, t: float) -> ContactOrder:
    """Order of contact between the curve and its osculating circle at ``t``."""
    dk = abs(curvature_derivative(c, t))
    if dk <= VERTEX_RTOL * float(_kappa_prime_scale(c, t)):
        return ContactOrder.THIRD_OR_HIGHER
    return ContactOrder.SECOND


def find_cusps(c: ParametricCurve, n_scan: int = DEFAULT_N_SCAN) -> list[EvoluteCusp]:
    """Vertices of ``c`` (roots of ``kappa'``) with their evolute cusps.

    Simple roots are bracketed on an ``n_scan`` grid and bisected.  Double
    roots (``kappa'`` touching zero without changing sign) are picked up as
    near-zero local minima of ``|kappa'|``.  A curve whose ``kappa'``
    vanishes everywhere (a circle) has no cusps.
    """
    if n_scan < 64:
        raise ValueError("n_scan must be at least 64")
    t = c.grid(n_scan)
    dk = curvature_derivative(c, t)
    scale = _kappa_prime_scale(c, t)
    zero = np.abs(dk) <= VERTEX_RTOL * scale
    if zero.all():
        return []
    s = np.where(zero, 0.0, np.sign(dk))

    if c.closed:
        nxt = np.roll(np.arange(n_scan), -1)
        t_next = np.append(t[1:], c.t_hi)
    else:
        nxt = np.arange(1, n_scan)
        t_next = t[1:]
    left = np.arange(len(nxt))
    roots = []

    def fk(x):
        return curvature_derivative(c, x)

    # sign changes, possibly through exact zeros at grid nodes
    change = s[left] * s[nxt] < 0
    if change.any():
        lo, hi = t[left[change]], t_next[change]
        roots.extend(bisect(fk, lo, hi, xtol=1e-14 * c.length).tolist())
    for i in np.nonzero(zero)[0]:
        # a run of zero samples is one root; keep its middle
        if not zero[i - 1] or (not c.closed and i == 0):
            j = i
            while j + 1 < n_scan and zero[j + 1]:
                j += 1
            roots.append(float(t[(i + j) // 2]))
    # double roots: |kappa'| dips close to zero without a sign change
    a = np.abs(dk) / scale
    if c.closed:
        prev, after = np.roll(a, 1), np.roll(a, -1)
        interior = np.ones(n_scan, dtype=bool)
    else:
        prev, after = np.r_[np.inf, a[:-1]], np.r_[a[1:], np.inf]
        interior = np.r_[False, np.ones(n_scan - 2, dtype=bool), False]
    dip = interior & ~zero & (a < prev) & (a < after) & (a < 1e-3 * np.median(a))
    dip &= s == np.roll(s, 1)
    for i in np.nonzero(dip)[0]:
        h = c.length / n_scan
        res = minimize_scalar(lambda x: abs(curvature_derivative(c, x)),
                              bounds=(t[i] - h, t[i] + h), method="bounded",
                              options={"xatol": 1e-13 * c.length})
        if abs(res.fun) <= VERTEX_RTOL * float(_kappa_prime_scale(c, res.x)):
            roots.append(float(res.x))

    roots = np.sort(np.asarray(c.wrap(np.asarray(roots)), dtype=float))
    if c.closed and len(roots):
        # snap roots at the seam onto t_lo
        roots[np.isclose(roots, c.t_hi, rtol=0, atol=1e-9 * c.length)] = c.t_lo
        roots = np.sort(roots)
    keep = np.ones(len(roots), dtype=bool)
    tol = 1e-6 * c.length
    for i in range(1, len(roots)):
        if roots[i] - roots[i - 1] < tol:
            keep[i] = False
    if c.closed and keep.sum() > 1 and roots[0] + c.length - roots[keep][-1] < tol:
        keep[np.nonzero(keep)[0][-1]] = False
    roots = roots[keep]

    cusps = []
    h = 1e-3 * c.length
    for r in roots:
        k = signed_curvature(c, r)
        if abs(k) < ZERO_CURVATURE_RTOL / c.diameter:
            continue
        kind = _extremum_kind(c, r, h)
        e = evolute_point(c, r)
        cusps.append(EvoluteCusp(float(r), e, 1.0 / abs(k), kind))
    return cusps


def _extremum_kind(c: ParametricCurve, t: float, h: float) -> CuspKind:
    """Max or min of ``|kappa|`` at a root of ``kappa'``."""
    k0 = abs(signed_curvature(c, t))
    sgn = np.sign(signed_curvature(c, t))
    # kappa'' by a central difference of the analytic kappa'
    d2 = sgn * (curvature_derivative(c, c.wrap(t + h)) - curvature_derivative(c, c.wrap(t - h))) / (2 * h)
    if abs(d2) > 1e-6 * float(_kappa_prime_scale(c, t)) * c.length:
        return CuspKind.MAX_CURVATURE if d2 < 0 else CuspKind.MIN_CURVATURE
    # flat vertex: compare neighbouring curvature values
    side = []
    for x in (t - 4 * h, t + 4 * h):
        if not c.closed and not (c.t_lo <= x <= c.t_hi):
            continue
        side.append(abs(signed_curvature(c, c.wrap(x))))
    return CuspKind.MAX_CURVATURE if all(s <= k0 for s in side) else CuspKind.MIN_CURVATURE
