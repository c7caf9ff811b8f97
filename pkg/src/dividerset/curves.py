"""Parametric plane curves and the preset families used throughout.

A curve is a map ``t -> (x1(t), x2(t))`` on a closed parameter interval,
optionally periodic.  Presets carry analytic derivatives up to order four;
anything else falls back to central finite differences of the position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import CurveSpecError, SingularParameterizationError

MAX_ORDER = 4

# 5-point central stencils, (offsets, weights, power of h in the denominator)
_STENCILS = {
    1: (np.array([-2, -1, 1, 2]), np.array([1, -8, 8, -1]) / 12.0, 1),
    2: (np.array([-2, -1, 0, 1, 2]), np.array([-1, 16, -30, 16, -1]) / 12.0, 2),
    3: (np.array([-2, -1, 1, 2]), np.array([-1, 2, -2, 1]) / 2.0, 3),
    4: (np.array([-2, -1, 0, 1, 2]), np.array([1, -4, 6, -4, 1]), 4),
}
# relative step per derivative order; higher orders need larger steps to
# keep cancellation noise below the truncation error
_FD_STEP = {1: 1e-5, 2: 1e-5, 3: 1e-3, 4: 2e-3}


class Point2(NamedTuple):
    x1: float
    x2: float


@dataclass(frozen=True, eq=False)
class ParametricCurve:
    """A plane curve ``S(t)`` on ``[t_lo, t_hi]``.

    Parameters
    ----------
    position : callable
        Maps an array of parameters of shape ``(...)`` to points ``(..., 2)``.
    derivatives : sequence of callables
        Analytic derivative evaluators for orders ``1, 2, ...``; may be
        shorter than four or empty, missing orders use finite differences.
    domain : (float, float)
        Parameter interval.
    closed : bool
        True when the parameter wraps and ``S(t_lo) == S(t_hi)``.
    name : str, optional
        Preset label, e.g. ``"ellipse:2,1"``.
    """

    position: Callable[[np.ndarray], np.ndarray]
    derivatives: tuple = ()
    domain: tuple[float, float] = (0.0, 1.0)
    closed: bool = False
    name: str | None = None
    symmetry: dict = field(default_factory=dict)

    def __call__(self, t) -> np.ndarray:
        return self.position(np.asarray(t, dtype=float))

    @property
    def t_lo(self) -> float:
        return float(self.domain[0])

    @property
    def t_hi(self) -> float:
        return float(self.domain[1])

    @property
    def length(self) -> float:
        """Length of the parameter interval (not arc length)."""
        return self.t_hi - self.t_lo

    def derivative(self, t, order: int = 1) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if not 1 <= order <= MAX_ORDER:
            raise ValueError(f"derivative order must be in 1..{MAX_ORDER}")
        if order <= len(self.derivatives) and self.derivatives[order - 1] is not None:
            return self.derivatives[order - 1](t)
        return self.finite_difference(t, order)

    def finite_difference(self, t, order: int) -> np.ndarray:
        """Central 5-point finite difference of the position."""
        t = np.asarray(t, dtype=float)
        offsets, weights, power = _STENCILS[order]
        h = _FD_STEP[order] * self.length
        acc = np.zeros(t.shape + (2,))
        for k, w in zip(offsets, weights):
            acc += w * self.position(t + k * h)
        return acc / h**power

    def wrap(self, t):
        """Map parameters into the domain (periodic curves only)."""
        if not self.closed:
            return t
        return self.t_lo + np.mod(np.asarray(t, dtype=float) - self.t_lo, self.length)

    def parameter_gap(self, a, b):
        """Parameter separation, measured around the circle for closed curves."""
        d = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
        if self.closed:
            d = np.mod(d, self.length)
            d = np.minimum(d, self.length - d)
        return d

    def grid(self, n: int) -> np.ndarray:
        """Uniform parameter grid; endpoint excluded for closed curves."""
        if self.closed:
            return self.t_lo + self.length * np.arange(n) / n
        return np.linspace(self.t_lo, self.t_hi, n)

    @cached_property
    def diameter(self) -> float:
        pts = self(self.grid(1024))
        d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
        return float(d.max())

    def check(self, n: int = 4096, tol: float = 1e-9) -> None:
        """Sampled checks of continuity, closure and regularity."""
        t = self.grid(n)
        pts = self(t)
        if not np.all(np.isfinite(pts)):
            raise CurveSpecError("curve position is not finite on its domain")
        speed = np.linalg.norm(self.derivative(t, 1), axis=-1)
        if speed.min() <= tol * max(self.diameter, 1.0):
            raise SingularParameterizationError(
                f"first derivative vanishes near t={t[np.argmin(speed)]:.6g}"
            )
        step = self.length / n
        jumps = np.linalg.norm(np.diff(pts, axis=0), axis=-1)
        if np.any(jumps > 4 * step * np.maximum(speed[:-1], speed[1:]) + tol):
            raise CurveSpecError("curve position is discontinuous on its domain")
        if self.closed:
            gap = np.linalg.norm(self(self.t_lo) - self(self.t_hi))
            if gap > 1e-7 * max(self.diameter, 1.0):
                raise CurveSpecError("closed curve does not return to its start point")


def _rotation_derivs(center, radius_x, radius_y, sign=1.0):
    """Position and derivatives of ``(c1 + a cos t, c2 + b sin t)``."""
    c = np.asarray(center, dtype=float)

    def make(order):
        # d^k/dt^k cos t = cos(t + k pi/2)
        def f(t):
            t = np.asarray(t, dtype=float)
            ph = t + order * math.pi / 2
            out = np.stack([radius_x * np.cos(ph), radius_y * np.sin(ph)], axis=-1)
            return out + c if order == 0 else out

        return f

    return make(0), tuple(make(k) for k in range(1, MAX_ORDER + 1))


def circle(radius: float = 1.0, center: Sequence[float] = (0.0, 0.0)) -> ParametricCurve:
    if radius <= 0:
        raise CurveSpecError("circle radius must be positive")
    pos, ders = _rotation_derivs(center, radius, radius)
    return ParametricCurve(pos, ders, (0.0, 2 * math.pi), True, f"circle:{radius:g}",
                           symmetry={"reflect_x1": center[1] == 0, "reflect_x2": center[0] == 0})


def ellipse(a: float = 2.0, b: float = 1.0) -> ParametricCurve:
    if not (a >= b > 0):
        raise CurveSpecError("ellipse needs a >= b > 0")
    pos, ders = _rotation_derivs((0.0, 0.0), a, b)
    return ParametricCurve(pos, ders, (0.0, 2 * math.pi), True, f"ellipse:{a:g},{b:g}",
                           symmetry={"reflect_x1": True, "reflect_x2": True})


def segment(p: Sequence[float] = (-1.0, 0.0), q: Sequence[float] = (1.0, 0.0)) -> ParametricCurve:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.allclose(p, q):
        raise CurveSpecError("segment endpoints must differ")
    v = q - p

    def pos(t):
        return p + np.asarray(t, dtype=float)[..., None] * v

    def d1(t):
        return np.broadcast_to(v, np.shape(t) + (2,)).copy()

    def zero(t):
        return np.zeros(np.shape(t) + (2,))

    return ParametricCurve(pos, (d1, zero, zero, zero), (0.0, 1.0), False,
                           f"segment:{p[0]:g},{p[1]:g},{q[0]:g},{q[1]:g}")


def parabola(focal: float = 0.25, half_width: float | None = None) -> ParametricCurve:
    """The parabola ``x2 = x1**2 / (4 focal)``, truncated to ``|x1| <= half_width``.

    The default half width is ``24 * focal``.
    """
    if focal <= 0:
        raise CurveSpecError("parabola focal length must be positive")
    w = 24.0 * focal if half_width is None else float(half_width)
    if w <= 0:
        raise CurveSpecError("parabola half width must be positive")
    c = 1.0 / (4.0 * focal)

    def pos(t):
        t = np.asarray(t, dtype=float)
        return np.stack([t, c * t * t], axis=-1)

    def d1(t):
        t = np.asarray(t, dtype=float)
        return np.stack([np.ones_like(t), 2 * c * t], axis=-1)

    def d2(t):
        t = np.asarray(t, dtype=float)
        return np.stack([np.zeros_like(t), np.full_like(t, 2 * c)], axis=-1)

    def zero(t):
        return np.zeros(np.shape(t) + (2,))

    return ParametricCurve(pos, (d1, d2, zero, zero), (-w, w), False, f"parabola:{focal:g}",
                           symmetry={"reflect_x2": True})


def hypotrochoid(big: float = 5.0, small: float = 2.0, offset: float = 0.6) -> ParametricCurve:
    """Roulette of a point at ``offset`` from the centre of a circle of radius
    ``small`` rolling inside a circle of radius ``big``.

    ``z(t) = (big - small) e^{it} + offset e^{-i (big - small)/small t}``.
    """
    if not (big > small > 0) or offset <= 0:
        raise CurveSpecError("hypotrochoid needs R > r > 0 and d > 0")
    a = big - small
    k = a / small
    ratio = Fraction(big / small).limit_denominator(1000)
    period = 2 * math.pi * ratio.denominator
    folds = ratio.numerator

    def make(order):
        ca = a * (1j) ** order
        cb = offset * (-1j * k) ** order

        def f(t):
            t = np.asarray(t, dtype=float)
            z = ca * np.exp(1j * t) + cb * np.exp(-1j * k * t)
            return np.stack([z.real, z.imag], axis=-1)

        return f

    return ParametricCurve(make(0), tuple(make(m) for m in range(1, MAX_ORDER + 1)),
                           (0.0, period), True, f"hypotrochoid:{big:g},{small:g},{offset:g}",
                           symmetry={"rotation_order": folds, "reflect_x1": True})


def from_points(points, closed: bool = False, name: str | None = None) -> ParametricCurve:
    """Interpolating cubic spline through an ordered point list.

    The parameter is cumulative chord length; derivatives come from finite
    differences of the spline position.
    """
    from scipy.interpolate import CubicSpline

    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 4:
        raise CurveSpecError("sampled curves need at least 4 points of 2 coordinates")
    if closed and not np.allclose(pts[0], pts[-1]):
        pts = np.vstack([pts, pts[:1]])
    chord = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    if np.any(chord == 0):
        raise CurveSpecError("sampled curve has repeated consecutive points")
    s = np.concatenate([[0.0], np.cumsum(chord)])
    spline = CubicSpline(s, pts, bc_type="periodic" if closed else "not-a-knot")
    length = s[-1]

    def pos(t):
        t = np.asarray(t, dtype=float)
        if closed:
            t = np.mod(t, length)
        return spline(t)

    return ParametricCurve(pos, (), (0.0, float(length)), closed, name or "sampled")


PRESETS = {
    "circle": circle,
    "ellipse": ellipse,
    "segment": segment,
    "parabola": parabola,
    "hypotrochoid": hypotrochoid,
}


def parse_preset(text: str) -> ParametricCurve:
    """Build a preset from ``name:p1,p2,...``, e.g. ``ellipse:2,1``."""
    name, _, params = text.partition(":")
    name = name.strip().lower()
    if name not in PRESETS:
        raise CurveSpecError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}")
    try:
        values = [float(v) for v in params.split(",")] if params.strip() else []
    except ValueError as exc:
        raise CurveSpecError(f"bad preset parameters in {text!r}") from exc
    if name == "segment":
        if len(values) not in (0, 4):
            raise CurveSpecError("segment takes x0,y0,x1,y1")
        curve = segment(values[:2], values[2:]) if values else segment()
    elif name == "circle" and len(values) == 3:
        curve = circle(values[0], values[1:])
    else:
        try:
            curve = PRESETS[name](*values)
        except TypeError as exc:
            raise CurveSpecError(f"wrong number of parameters for {name}") from exc
    return curve
