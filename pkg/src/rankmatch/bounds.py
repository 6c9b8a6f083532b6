"""Numerical evaluation and minimization of the pair-gain lower bounds.

Two closed-form lower-bound surfaces over the (tau, gamma) unit square are
provided. The simple form charges the corner mass plus one share integral
per side:

    (1-tau)(1-gamma) + int_0^gamma share(x, tau) dx + int_0^tau share(x, gamma) dx

The improved form keeps the corner and v-side terms but replaces the u-side
integrand with an inner minimization over a marginal rank theta <= gamma:

    share(x, theta) + int_0^theta share(y, x) dy + int_theta^gamma share(y, tau) dy

The inner minimum is found exactly from a finite candidate set (endpoints,
curve kinks, stationary points); the outer integrals use adaptive Simpson
quadrature with panels forced apart at curve kinks. minimize_bound scans a
coarse grid and polishes with alternating golden-section line searches,
reproducing the worst-case constants of both built-in curves. The module
also evaluates the threshold-profile integral: a lower bound on the
competitive ratio given explicit beta/theta profiles.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Mapping

from .gains import ADVERSARIAL, HALF_EXP, SIMPLE_EXP, GainSpec
from .numerics import bisect_root, golden_minimize, integrate


class ProfileError(ValueError):
    """Invalid threshold profile supplied to the integral evaluator."""


@dataclass(frozen=True)
class BoundPoint:
    """A (tau, gamma) point of a bound surface and the value there."""

    tau: float
    gamma: float
    value: float


def _check_unit_pair(tau: float, gamma: float) -> None:
    if not (0.0 <= tau <= 1.0 and 0.0 <= gamma <= 1.0):
        raise ValueError(f"(tau, gamma) must lie in the unit square: ({tau}, {gamma})")


def simple_bound(spec: GainSpec, tau: float, gamma: float,
                 tol: float = 1e-10) -> float:
    """Corner mass plus one share integral per side; quadrature error <= tol."""
    _check_unit_pair(tau, gamma)
    bps = spec.curve_breakpoints
    share = spec.share_scalar
    left = integrate(lambda x: share(x, tau), 0.0, gamma,
                     tol=0.5 * tol, breakpoints=bps)
    right = integrate(lambda x: share(x, gamma), 0.0, tau,
                      tol=0.5 * tol, breakpoints=bps)
    return (1.0 - tau) * (1.0 - gamma) + left + right


def _stationary_candidates(spec: GainSpec, diff: float) -> tuple[float, ...]:
    """Solutions of curve'(theta) = diff on the smooth part of the curve."""
    if diff <= 0.0:
        return ()
    if spec.kind == SIMPLE_EXP:
        # curve'(theta) = e^(theta - 1/2) below the kink
        if math.exp(-0.5) <= diff <= 1.0:
            return (0.5 + math.log(diff),)
        return ()
    if spec.kind == HALF_EXP:
        # curve'(theta) = e^theta / 2 below the kink
        if 0.5 <= diff <= 1.0:
            return (math.log(2.0 * diff),)
        return ()
    return ()


def _inner_minimum_fn(spec: GainSpec, tau: float, gamma: float):
    """Evaluator for min over theta in [0, gamma] of the improved u-side
    integrand at x.

    The objective's theta-derivative is (curve(tau) - curve(x) - curve'(theta))/2,
    so the minimum sits at an endpoint, a curve kink, or a stationary point;
    for table curves the objective is piecewise affine in theta and the knots
    suffice. Candidate curve/antiderivative values that do not depend on x
    are hoisted out of the returned closure.
    """
    curve = spec.curve_scalar
    antid = spec.curve_antideriv
    c_tau = curve(tau)
    h_gamma = antid(gamma)
    fixed = [0.0, gamma]
    fixed += [bp for bp in spec.curve_breakpoints if 0.0 < bp < gamma]
    fixed_vals = [(th, curve(th), antid(th)) for th in fixed]
    exp_kind = spec.kind in (SIMPLE_EXP, HALF_EXP)

    def inner(x: float) -> float:
        c_x = curve(x)
        cands = fixed_vals
        if exp_kind:
            extra = [(s, curve(s), antid(s))
                     for s in _stationary_candidates(spec, c_tau - c_x)
                     if 0.0 < s < gamma]
            if extra:
                cands = fixed_vals + extra
        best = math.inf
        for th, c_th, h_th in cands:
            # share(x, th) + int_0^th share(y, x) dy + int_th^gamma share(y, tau) dy
            val = (0.5 * (c_x + 1.0 - c_th)
                   + 0.5 * (h_th + th * (1.0 - c_x))
                   + 0.5 * ((h_gamma - h_th) + (gamma - th) * (1.0 - c_tau)))
            if val < best:
                best = val
        return best

    return inner


def improved_bound(spec: GainSpec, tau: float, gamma: float,
                   tol: float = 1e-9) -> float:
    """Improved lower-bound surface; never below simple_bound.

    The v-side integral is exact (closed-form share antiderivatives); the
    u-side outer integral of the inner minimum uses adaptive quadrature, so
    the absolute error is bounded by tol.
    """
    _check_unit_pair(tau, gamma)
    corner = (1.0 - tau) * (1.0 - gamma)
    v_side = (1.0 - tau) * spec.share_integral_first(0.0, gamma, tau)
    if spec.kind == ADVERSARIAL:
        # the inner objective does not depend on theta at all
        v_mass = math.exp(gamma - 1.0) - math.exp(-1.0)
        inner = lambda x: math.exp(x - 1.0) + v_mass  # noqa: E731
    else:
        inner = _inner_minimum_fn(spec, tau, gamma)
    u_side = integrate(inner, 0.0, tau, tol=tol,
                       breakpoints=spec.curve_breakpoints)
    return corner + v_side + u_side


_BOUNDS: dict[str, Callable[..., float]] = {
    "simple": simple_bound,
    "improved": improved_bound,
}


def bound_function(which: str) -> Callable[..., float]:
    if which not in _BOUNDS:
        raise ValueError(f"which must be one of {sorted(_BOUNDS)}, got {which!r}")
    return _BOUNDS[which]


def minimize_bound(spec: GainSpec, which: str, grid_n: int = 256,
                   scan_tol: float = 1e-6, refine_tol: float = 1e-9,
                   arg_tol: float = 1e-6) -> BoundPoint:
    """Global minimum of a bound surface over the unit square.

    Coarse grid_n x grid_n scan (endpoints included), then alternating
    golden-section refinement of each coordinate inside the winning cell's
    neighborhood down to arg_tol. Deterministic: ties on the scan resolve
    to the first grid point in row-major order.
    """
    f = bound_function(which)
    pts = [i / (grid_n - 1) for i in range(grid_n)]
    best = (math.inf, 0.0, 0.0)
    for t in pts:
        for g in pts:
            val = f(spec, t, g, tol=scan_tol)
            if val < best[0]:
                best = (val, t, g)
    _, tau, gamma = best
    window = 2.0 / (grid_n - 1)
    for _ in range(24):
        new_tau, _ = golden_minimize(
            lambda t: f(spec, t, gamma, tol=refine_tol),
            max(0.0, tau - window), min(1.0, tau + window), tol=arg_tol)
        new_gamma, _ = golden_minimize(
            lambda g: f(spec, new_tau, g, tol=refine_tol),
            max(0.0, gamma - window), min(1.0, gamma + window), tol=arg_tol)
        moved = max(abs(new_tau - tau), abs(new_gamma - gamma))
        tau, gamma = new_tau, new_gamma
        window = max(4.0 * arg_tol, 0.5 * window)
        if moved < arg_tol:
            break
    return BoundPoint(tau=tau, gamma=gamma, value=f(spec, tau, gamma, tol=refine_tol))


def heatmap_rows(spec: GainSpec, which: str, grid_n: int,
                 tol: float = 1e-8) -> list[tuple[float, float, float]]:
    """(tau, gamma, value) rows over a uniform grid, row-major in tau."""
    f = bound_function(which)
    pts = [i / (grid_n - 1) for i in range(grid_n)]
    return [(t, g, f(spec, t, g, tol=tol)) for t in pts for g in pts]


def solve_curve_equals_two_t(spec: GainSpec, tol: float = 1e-10) -> float:
    """Root of curve(t) = 2 t in [0, 1] by bracketed bisection.

    For both built-in exp curves the crossing exists and is unique:
    curve(0) > 0 and curve(1) <= 1 < 2.
    """
    return bisect_root(lambda t: float(spec.curve(t)) - 2.0 * t, 0.0, 1.0, tol=tol)


def stationary_tau(spec: GainSpec, gamma: float,
                   quad_tol: float = 1e-10, arg_tol: float = 1e-6,
                   ) -> tuple[float, float]:
    """Interior minimizer of improved_bound along tau at fixed gamma.

    Returns (tau, value) from a golden-section search over [0, 1]; the
    slice is unimodal for the built-in curves.
    """
    return golden_minimize(lambda t: improved_bound(spec, t, gamma, tol=quad_tol),
                           0.0, 1.0, tol=arg_tol)


# -- threshold profiles and the ratio integral ----------------------------


@dataclass(frozen=True)
class Piecewise:
    """Piecewise-constant or piecewise-linear function on [0, 1].

    xs are strictly increasing knots from 0.0 to 1.0. With kind="step" the
    function holds ys[i] on [xs[i], xs[i+1]) (len(ys) == len(xs) - 1, the
    point 1.0 maps to ys[-1]); with kind="linear" it interpolates between
    knot values (len(ys) == len(xs)).
    """

    xs: tuple[float, ...]
    ys: tuple[float, ...]
    kind: str = "step"

    def __post_init__(self):
        if self.kind not in ("step", "linear"):
            raise ProfileError(f"unknown piecewise kind {self.kind!r}")
        if len(self.xs) < 2 or self.xs[0] != 0.0 or self.xs[-1] != 1.0:
            raise ProfileError("knots must run from 0.0 to 1.0")
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise ProfileError("knots must be strictly increasing")
        expect = len(self.xs) - 1 if self.kind == "step" else len(self.xs)
        if len(self.ys) != expect:
            raise ProfileError(f"expected {expect} values for {self.kind} profile")
        if any(not (0.0 <= y <= 1.0) for y in self.ys):
            raise ProfileError("profile values must lie in [0, 1]")

    def __call__(self, t: float) -> float:
        if not (0.0 <= t <= 1.0):
            raise ProfileError(f"argument outside [0, 1]: {t}")
        i = self._segment(t)
        if self.kind == "step":
            return self.ys[i]
        x0, x1 = self.xs[i], self.xs[i + 1]
        y0, y1 = self.ys[i], self.ys[i + 1]
        return y0 + (y1 - y0) * (t - x0) / (x1 - x0)

    def _segment(self, t: float) -> int:
        for i in range(len(self.xs) - 1):
            if t < self.xs[i + 1]:
                return i
        return len(self.xs) - 2

    def breaks(self) -> tuple[float, ...]:
        return tuple(x for x in self.xs if 0.0 < x < 1.0)

    def is_non_decreasing(self) -> bool:
        return all(b >= a for a, b in zip(self.ys, self.ys[1:]))

    def upper_inverse(self, x: float) -> float:
        """sup{t : f(t) <= x} for a non-decreasing profile (0.0 if empty)."""
        if self.kind == "step":
            out = 0.0
            for i, y in enumerate(self.ys):
                if y <= x:
                    out = self.xs[i + 1]
                else:
                    break
            return out
        if x >= self.ys[-1]:
            return 1.0
        if x < self.ys[0]:
            return 0.0
        for i in range(len(self.xs) - 2, -1, -1):
            if self.ys[i] <= x:
                y0, y1 = self.ys[i], self.ys[i + 1]
                if y1 <= x:
                    return self.xs[i + 1]
                x0, x1 = self.xs[i], self.xs[i + 1]
                return x0 + (x - y0) * (x1 - x0) / (y1 - y0)
        return 0.0

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "x": list(self.xs), "y": list(self.ys)}


def piecewise_from_json(obj: Mapping) -> Piecewise:
    return Piecewise(xs=tuple(float(x) for x in obj["x"]),
                     ys=tuple(float(y) for y in obj["y"]),
                     kind=str(obj.get("kind", "step")))


@dataclass(frozen=True)
class StepProfiles:
    """A (theta, beta) profile pair feeding the ratio integral.

    Pointwise 0 <= beta <= theta <= 1 and beta non-decreasing; checked on
    the union of knots and segment midpoints, which is exact for affine
    pieces.
    """

    theta_fn: Piecewise
    beta_fn: Piecewise

    def __post_init__(self):
        if not self.beta_fn.is_non_decreasing():
            raise ProfileError("beta profile must be non-decreasing")
        knots = sorted(set(self.theta_fn.xs) | set(self.beta_fn.xs))
        probes = list(knots)
        probes += [0.5 * (a + b) for a, b in zip(knots, knots[1:])]
        probes += [min(1.0, k + 1e-12) for k in knots[1:-1]]
        for t in probes:
            th, be = self.theta_fn(t), self.beta_fn(t)
            if not (0.0 <= be <= th + 1e-12 and th <= 1.0):
                raise ProfileError(f"need 0 <= beta <= theta <= 1; at {t}: "
                                   f"beta={be}, theta={th}")

    def to_json_dict(self) -> dict:
        return {"theta": self.theta_fn.to_json_dict(),
                "beta": self.beta_fn.to_json_dict()}


def profiles_from_json(obj: Mapping | str) -> StepProfiles:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return StepProfiles(theta_fn=piecewise_from_json(obj["theta"]),
                        beta_fn=piecewise_from_json(obj["beta"]))


def integral_bound(spec: GainSpec, profiles: StepProfiles,
                   tol: float = 1e-9) -> float:
    """Ratio lower bound from explicit threshold profiles.

    Integrates, over the online arrival time, the online side's floor gain
    outside the matched-to band, the full weight of the matched-to band,
    and the offline side's guaranteed gain in the matched-before and
    unmatched-after regions (credited at the inverse-beta marginal rank).
    Conventions: the inverse of beta extends to one at and above
    gamma = beta(1), and a share against a rank-one marginal counts as
    zero, so profiles that never match contribute nothing.
    """
    theta_fn, beta_fn = profiles.theta_fn, profiles.beta_fn
    gamma = beta_fn(1.0)

    def u_floor(x: float, t: float) -> float:
        if t >= 1.0:
            return 0.0
        return 1.0 - spec.share_scalar(t, x)

    def v_gain(y_v: float) -> float:
        if y_v >= gamma:
            return 0.0
        b = beta_fn.upper_inverse(y_v)
        if b >= 1.0:
            return 0.0
        return spec.share_scalar(y_v, b)

    v_breaks = set(spec.curve_breakpoints) | {gamma} | set(beta_fn.ys)

    def f(y_u: float) -> float:
        th = theta_fn(y_u)
        be = beta_fn(y_u)
        val = (1.0 - th + be) * u_floor(y_u, th) + (th - be)
        val += integrate(v_gain, 0.0, be, tol=0.1 * tol, breakpoints=v_breaks)
        val += integrate(v_gain, th, 1.0, tol=0.1 * tol, breakpoints=v_breaks)
        return val

    outer_breaks = (set(theta_fn.breaks()) | set(beta_fn.breaks())
                    | set(spec.curve_breakpoints))
    return integrate(f, 0.0, 1.0, tol=tol, breakpoints=outer_breaks)
