"""Gain-sharing specifications.

A GainSpec decides how a matched edge's weight is split between its two
endpoints as a function of their ranks. The weight-splitting kinds are built
from a non-decreasing curve c on [0, 1] with 0 <= c <= 1 and c' <= c:

    share(x, y) = (c(x) + 1 - c(y)) / 2

so that share(x, y) + share(y, x) = 1. Two closed-form curves are provided
("simple-exp" and "half-exp"), plus monotone piecewise-linear tables for
experimentation. The "adversarial" kind is the static-price baseline
share(x, y) = e^(x-1), which ignores the partner's rank entirely and is not
a weight split (its two shares do not sum to one).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

import numpy as np

SIMPLE_EXP = "simple-exp"
HALF_EXP = "half-exp"
ADVERSARIAL = "adversarial"
TABLE = "table"

LN2 = math.log(2.0)


class GainSpecError(ValueError):
    """Invalid gain specification or out-of-domain evaluation."""


def _check_unit(name: str, value) -> None:
    arr = np.asarray(value, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or np.any(np.isnan(arr)):
        raise GainSpecError(f"{name} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class GainSpec:
    """Immutable description of one gain-sharing rule.

    kind: one of "simple-exp", "half-exp", "adversarial", "table".
    breakpoints/values: only used by the "table" kind: knot positions
    (must start at 0 and end at 1) and curve values at the knots, with
    linear interpolation in between.
    """

    kind: str
    breakpoints: tuple[float, ...] = ()
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in (SIMPLE_EXP, HALF_EXP, ADVERSARIAL, TABLE):
            raise GainSpecError(f"unknown gain spec kind {self.kind!r}")
        if self.kind == TABLE:
            xs, ys = self.breakpoints, self.values
            if len(xs) < 2 or len(xs) != len(ys):
                raise GainSpecError("table needs matching breakpoints/values, >= 2 knots")
            if xs[0] != 0.0 or xs[-1] != 1.0:
                raise GainSpecError("table breakpoints must start at 0 and end at 1")
            if any(b <= a for a, b in zip(xs, xs[1:])):
                raise GainSpecError("table breakpoints must be strictly increasing")
            _check_unit("table values", ys)
            if any(b < a for a, b in zip(ys, ys[1:])):
                raise GainSpecError("table values must be non-decreasing")
        elif self.breakpoints or self.values:
            raise GainSpecError(f"{self.kind} takes no breakpoints/values")

    # -- the one-dimensional curve ------------------------------------

    @property
    def is_weight_split(self) -> bool:
        """True when the shares of the two endpoints sum to the full weight."""
        return self.kind != ADVERSARIAL

    @property
    def curve_breakpoints(self) -> tuple[float, ...]:
        """Interior kinks of the curve; quadrature must split here."""
        if self.kind == SIMPLE_EXP:
            return (0.5,)
        if self.kind == HALF_EXP:
            return (LN2,)
        if self.kind == TABLE:
            return tuple(x for x in self.breakpoints if 0.0 < x < 1.0)
        return ()

    def curve(self, x):
        """Curve value c(x); accepts scalars or numpy arrays in [0, 1]."""
        _check_unit("curve argument", x)
        if self.kind == SIMPLE_EXP:
            return np.minimum(1.0, np.exp(np.asarray(x, dtype=float) - 0.5))
        if self.kind == HALF_EXP:
            return np.minimum(1.0, 0.5 * np.exp(np.asarray(x, dtype=float)))
        if self.kind == TABLE:
            return np.interp(np.asarray(x, dtype=float), self.breakpoints, self.values)
        raise GainSpecError("the adversarial baseline has no underlying curve")

    def curve_scalar(self, x: float) -> float:
        """curve() for scalar hot paths: plain math, no domain validation."""
        if self.kind == SIMPLE_EXP:
            return min(1.0, math.exp(x - 0.5))
        if self.kind == HALF_EXP:
            return min(1.0, 0.5 * math.exp(x))
        if self.kind == TABLE:
            return float(np.interp(x, self.breakpoints, self.values))
        raise GainSpecError("the adversarial baseline has no underlying curve")

    def share_scalar(self, x: float, y: float) -> float:
        """share() for scalar hot paths: plain math, no domain validation."""
        if self.kind == ADVERSARIAL:
            return math.exp(x - 1.0)
        return 0.5 * (self.curve_scalar(x) + 1.0 - self.curve_scalar(y))

    @cached_property
    def _table_cums(self) -> tuple[float, ...]:
        # exact trapezoid cumulative integral of the table curve at the knots
        cums = [0.0]
        for (x0, x1, y0, y1) in zip(self.breakpoints, self.breakpoints[1:],
                                    self.values, self.values[1:]):
            cums.append(cums[-1] + 0.5 * (y0 + y1) * (x1 - x0))
        return tuple(cums)

    def curve_integral(self, a: float, b: float) -> float:
        """Exact integral of the curve over [a, b] (closed form per kind)."""
        if b < a:
            return -self.curve_integral(b, a)
        if self.kind == ADVERSARIAL:
            raise GainSpecError("the adversarial baseline has no underlying curve")
        _check_unit("integral bounds", (a, b))
        return self.curve_antideriv(b) - self.curve_antideriv(a)

    def curve_antideriv(self, t: float) -> float:
        """Exact antiderivative of the curve with value 0 at t = 0."""
        if self.kind == SIMPLE_EXP:
            if t <= 0.5:
                return math.exp(t - 0.5) - math.exp(-0.5)
            return (1.0 - math.exp(-0.5)) + (t - 0.5)
        if self.kind == HALF_EXP:
            if t <= LN2:
                return 0.5 * (math.exp(t) - 1.0)
            return 0.5 + (t - LN2)
        # table: cumulative at the enclosing knot plus a partial trapezoid
        i = int(np.searchsorted(self.breakpoints, t, side="right")) - 1
        i = min(max(i, 0), len(self.breakpoints) - 2)
        x0, x1 = self.breakpoints[i], self.breakpoints[i + 1]
        y0, y1 = self.values[i], self.values[i + 1]
        frac = (t - x0) / (x1 - x0)
        yt = y0 + (y1 - y0) * frac
        return self._table_cums[i] + 0.5 * (y0 + yt) * (t - x0)

    # -- the two-dimensional share ------------------------------------

    def share(self, x, y):
        """Fraction of the matched weight kept by the rank-x endpoint when
        its partner has rank y. Scalar or numpy-array arguments."""
        if self.kind == ADVERSARIAL:
            _check_unit("share argument x", x)
            _check_unit("share argument y", y)
            x = np.asarray(x, dtype=float)
            y = np.asarray(y, dtype=float)
            out = np.exp(x - 1.0) + 0.0 * y  # broadcast against y's shape
            return float(out) if out.ndim == 0 else out
        cx = self.curve(x)
        cy = self.curve(y)
        out = 0.5 * (cx + 1.0 - cy)
        return float(out) if np.ndim(out) == 0 else out

    def share_integral_first(self, a: float, b: float, y: float) -> float:
        """Exact integral of share(t, y) dt over t in [a, b]."""
        if self.kind == ADVERSARIAL:
            _check_unit("integral bounds", (float(a), float(b)))
            return math.exp(b - 1.0) - math.exp(a - 1.0)
        return 0.5 * (self.curve_integral(a, b) + (b - a) * (1.0 - self.curve_scalar(y)))

    # -- serialization --------------------------------------------------

    def to_json_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == TABLE:
            out["breakpoints"] = list(self.breakpoints)
            out["values"] = list(self.values)
        return out


def simple_exp() -> GainSpec:
    """Curve min(1, e^(x - 1/2)); kink at 1/2."""
    return GainSpec(SIMPLE_EXP)


def half_exp() -> GainSpec:
    """Curve min(1, e^x / 2); kink at ln 2."""
    return GainSpec(HALF_EXP)


def adversarial_baseline() -> GainSpec:
    """Static-price baseline share(x, y) = e^(x-1), independent of y."""
    return GainSpec(ADVERSARIAL)


def piecewise_table(breakpoints, values, check_slope: bool = True) -> GainSpec:
    """Monotone piecewise-linear curve from knots.

    With check_slope=True (the default) the construction rejects tables whose
    segment slope exceeds the curve value anywhere (such curves break the
    share-derivative bound and the analysis built on it). Passing
    check_slope=False admits them for diagnostic use, e.g. to demonstrate
    that check_share_derivative_bound flags the violation.
    """
    spec = GainSpec(TABLE, tuple(float(x) for x in breakpoints),
                    tuple(float(v) for v in values))
    if check_slope:
        for (x0, x1, y0, y1) in zip(spec.breakpoints, spec.breakpoints[1:],
                                    spec.values, spec.values[1:]):
            slope = (y1 - y0) / (x1 - x0)
            # the curve is non-decreasing, so its minimum on the segment is y0
            if slope > y0 + 1e-12:
                raise GainSpecError(
                    f"table slope {slope:.6g} exceeds curve value {y0:.6g} "
                    f"on [{x0:.6g}, {x1:.6g}]")
    return spec


_NAMED = {SIMPLE_EXP: simple_exp, HALF_EXP: half_exp, ADVERSARIAL: adversarial_baseline}


def gain_spec_from_json(obj: Mapping | str) -> GainSpec:
    """Parse {"kind": ...} (optionally with table knots) into a GainSpec."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    kind = obj.get("kind")
    if kind in _NAMED:
        return _NAMED[kind]()
    if kind == TABLE:
        return piecewise_table(obj.get("breakpoints", ()), obj.get("values", ()))
    raise GainSpecError(f"unknown gain spec kind {kind!r}")


def named_spec(name: str) -> GainSpec:
    """Look up one of the built-in spec names used on the command line."""
    if name not in _NAMED:
        raise GainSpecError(f"unknown gain spec name {name!r}")
    return _NAMED[name]()


@dataclass(frozen=True)
class DerivativeBoundReport:
    """Result of the finite-difference sweep of d share/d y >= share - 1."""

    grid_n: int
    max_violation: float
    worst_x: float
    worst_y: float

    def holds(self, tol: float = 1e-6) -> bool:
        return self.max_violation <= tol


def check_share_derivative_bound(spec: GainSpec, grid_n: int) -> DerivativeBoundReport:
    """Sweep a grid_n x grid_n grid checking d share(x,y)/dy >= share(x,y) - 1.

    Central differences are used away from curve kinks; next to a kink (or a
    domain edge) the difference is taken one-sided, away from the kink, so no
    stencil ever straddles a non-smooth point. Returns the largest value of
    (share - 1) - d share/dy seen; positive means the bound failed somewhere.
    """
    if spec.kind == ADVERSARIAL:
        raise GainSpecError("derivative bound applies to weight-splitting specs only")
    if grid_n < 2:
        raise GainSpecError("grid_n must be >= 2")
    pts = (np.arange(grid_n) + 0.5) / grid_n
    d = 0.25 / grid_n
    bps = np.array(spec.curve_breakpoints)

    cy = spec.curve(pts)
    cy_plus = spec.curve(np.minimum(pts + d, 1.0))
    cy_minus = spec.curve(np.maximum(pts - d, 0.0))

    # one-sided stencil wherever (y-d, y+d) contains a kink or leaves [0, 1]
    def crosses(lo, hi):
        if bps.size == 0:
            return np.zeros_like(lo, dtype=bool)
        return np.any((bps[None, :] > lo[:, None]) & (bps[None, :] <= hi[:, None]), axis=1)

    central = (~crosses(pts - d, pts + d)) & (pts - d >= 0.0) & (pts + d <= 1.0)
    use_backward = crosses(pts, pts + d) | (pts + d > 1.0)

    dshare_dy = np.where(
        central,
        -0.5 * (cy_plus - cy_minus) / (2 * d),
        np.where(use_backward,
                 -0.5 * (cy - cy_minus) / d,
                 -0.5 * (cy_plus - cy) / d))

    cx = spec.curve(pts)
    # share(x, y) - 1 - d share/dy, maximized over the grid
    defect = 0.5 * (cx[:, None] + 1.0 - cy[None, :]) - 1.0 - dshare_dy[None, :]
    flat = int(np.argmax(defect))
    i, j = divmod(flat, grid_n)
    return DerivativeBoundReport(grid_n=grid_n,
                                 max_violation=float(defect[i, j]),
                                 worst_x=float(pts[i]),
                                 worst_y=float(pts[j]))
