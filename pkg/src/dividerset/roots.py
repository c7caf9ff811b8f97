"""Vectorised bracketed root finders.

Every routine works on arrays of independent problems at once; the callers
(foot finding, contact radii, evolute cusps) batch thousands of brackets.
"""

import numpy as np


def bracketed_newton(fdf, lo, hi, *, xtol=1e-12, max_iter=60):
    """Safeguarded Newton iteration on many brackets at once.

    Parameters
    ----------
    fdf : callable
        ``fdf(x) -> (f, df)`` evaluated elementwise on an array ``x``.
    lo, hi : array_like
        Bracket ends. ``f(lo)`` and ``f(hi)`` must not share a strict sign;
        ``lo == hi`` is allowed and returns immediately.
    xtol : float
        Absolute tolerance on the iterate.
    max_iter : int
        Iteration budget.

    Returns
    -------
    x : ndarray
        Root estimates.
    converged : ndarray of bool
        False where the budget ran out before the step dropped below ``xtol``.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    swap = lo > hi
    lo[swap], hi[swap] = hi[swap], lo[swap]
    if lo.size == 0:
        return lo, np.ones(0, dtype=bool)

    flo, _ = fdf(lo)
    fhi, _ = fdf(hi)
    x = 0.5 * (lo + hi)
    x = np.where(flo == 0, lo, np.where(fhi == 0, hi, x))
    done = (flo == 0) | (fhi == 0) | (hi - lo <= xtol)
    slo = np.sign(flo)

    for _ in range(max_iter):
        if done.all():
            break
        f, df = fdf(x)
        hit = f == 0
        left = np.sign(f) == slo
        lo = np.where(left & ~hit, x, lo)
        hi = np.where(~left & ~hit, x, hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = x - f / df
        bad = ~np.isfinite(xn) | (xn <= lo) | (xn >= hi)
        xn = np.where(bad, 0.5 * (lo + hi), xn)
        xn = np.where(hit | done, x, xn)
        step = np.abs(xn - x)
        done = done | hit | (step <= xtol) | (hi - lo <= xtol)
        x = xn
    return x, done


def bisect(f, lo, hi, *, xtol=1e-14, max_iter=200):
    """Plain vectorised bisection; ``f(lo)`` and ``f(hi)`` must differ in sign."""
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    if lo.size == 0:
        return lo
    slo = np.sign(f(lo))
    for _ in range(max_iter):
        if np.all(np.abs(hi - lo) <= xtol):
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        left = np.sign(fm) == slo
        lo = np.where(left, mid, lo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)
