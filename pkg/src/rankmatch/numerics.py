"""Deterministic scalar numerics: quadrature, root finding, line search.

Everything here is pure and reproducible; no global state, no randomness.
The integrators take explicit breakpoint lists so that piecewise integrands
(kinked share curves, step profiles) are never integrated across a kink.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def split_points(a: float, b: float, breakpoints: Iterable[float]) -> list[float]:
    """Panel endpoints for [a, b]: a, interior breakpoints in order, b."""
    pts = [a]
    for p in sorted(set(breakpoints)):
        if a < p < b:
            pts.append(p)
    pts.append(b)
    return pts


def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    return h / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(fa, flm, fm, m - a)
    right = _simpson(fm, frm, fb, b - m)
    err = left + right - whole
    if depth <= 0 or abs(err) <= 15.0 * tol:
        return left + right + err / 15.0
    return (_adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + _adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1))


def integrate(f: Callable[[float], float], a: float, b: float,
              tol: float = 1e-10, breakpoints: Iterable[float] = (),
              max_depth: int = 48) -> float:
    """Adaptive Simpson integral of f over [a, b].

    Panels are forced to split at every interior breakpoint, so f only needs
    to be smooth between consecutive breakpoints. Accepts a >= b (returns the
    signed value). Absolute error is roughly bounded by tol.
    """
    if a == b:
        return 0.0
    if b < a:
        return -integrate(f, b, a, tol, breakpoints, max_depth)
    pts = split_points(a, b, breakpoints)
    per_panel = tol / (len(pts) - 1)
    total = 0.0
    for lo, hi in zip(pts, pts[1:]):
        fa, fb = f(lo), f(hi)
        m = 0.5 * (lo + hi)
        fm = f(m)
        whole = _simpson(fa, fm, fb, hi - lo)
        total += _adaptive(f, lo, hi, fa, fm, fb, whole, per_panel, max_depth)
    return total


def golden_minimize(f: Callable[[float], float], a: float, b: float,
                    tol: float = 1e-6) -> tuple[float, float]:
    """Golden-section minimum of a unimodal f on [a, b] -> (argmin, value)."""
    if b < a:
        a, b = b, a
    x1 = b - _INV_PHI * (b - a)
    x2 = a + _INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
    x = 0.5 * (a + b)
    return x, f(x)


def bisect_root(f: Callable[[float], float], lo: float, hi: float,
                tol: float = 1e-10) -> float:
    """Root of f on [lo, hi]; f(lo) and f(hi) must have opposite signs."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bisect_boundary(pred: Callable[[float], bool], lo: float, hi: float,
                    tol: float = 1e-9) -> float:
    """Boundary point of a monotone predicate: pred holds at lo, fails at hi.

    Returns the midpoint of the final bracket; the true flip point lies
    within tol of it provided pred is monotone on [lo, hi].
    """
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
