"""Per-edge analysis: vary one edge's two ranks with everything else fixed.

Fixing all ranks except those of one online vertex u and one offline
neighbor v, the run outcome as a function of (y_u, y_v) has a rigid
structure: for each arrival time y_u, the offline rank axis splits into
three intervals (v already matched when u arrives / v matched to u /
v unmatched right after u's arrival) delimited by thresholds beta(y_u) and
theta(y_u). This module locates those thresholds numerically and estimates
the expected combined gain of the pair over uniformly random (y_u, y_v) by
midpoint quadrature.

Re-running the full simulation per grid cell would dominate everything, so
PairSweep batches lanes of (y_u, y_v) values: lanes sharing u's insertion
position in the fixed arrival order follow the same arrival sequence and
are simulated in lockstep with numpy. The scalar path through run_ranking
stays the reference; tests cross-check the two.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DualShares, Instance, MatchingResult, RankAssignment
from .gains import GainSpec
from .numerics import bisect_boundary
from .ranking import assign_duals, run_ranking

MATCHED_BEFORE = 0
MATCHED_TO_U = 1
UNMATCHED_AFTER = 2


class AnalysisError(ValueError):
    """Bad analysis request (e.g. the probed pair is not an edge)."""


class ThreeIntervalError(AssertionError):
    """The matched-before / matched-to / unmatched-after pattern broke.

    Raised when a rank sweep does not split into three contiguous intervals;
    this signals an engine bug (or a falsified structural property), so it
    is an assertion-level failure rather than an input error.
    """


def vary_two_ranks(instance: Instance, spec: GainSpec, base_ranks: RankAssignment,
                   online_id: str, offline_id: str, y_u: float, y_v: float,
                   ) -> tuple[MatchingResult, DualShares]:
    """Re-run ranking with only the two edge ranks overridden (scalar path)."""
    if not instance.has_edge(online_id, offline_id):
        raise AnalysisError(f"({online_id}, {offline_id}) is not an edge")
    ranks = base_ranks.override({online_id: float(y_u), offline_id: float(y_v)})
    result, _ = run_ranking(instance, spec, ranks, collect_offers=False)
    return result, assign_duals(instance, result, spec, ranks)


def edge_status(instance: Instance, spec: GainSpec, base_ranks: RankAssignment,
                online_id: str, offline_id: str, y_u: float, y_v: float) -> int:
    """v's status around u's arrival for one (y_u, y_v): scalar reference."""
    if not instance.has_edge(online_id, offline_id):
        raise AnalysisError(f"({online_id}, {offline_id}) is not an edge")
    ranks = base_ranks.override({online_id: float(y_u), offline_id: float(y_v)})
    result, trace = run_ranking(instance, spec, ranks, collect_offers=False)
    if (online_id, offline_id) in result.pairs:
        return MATCHED_TO_U
    if trace.match_time[offline_id] < y_u:
        return MATCHED_BEFORE
    return UNMATCHED_AFTER


@dataclass(frozen=True)
class SweepResult:
    """Per-lane outcome of a batched two-rank sweep."""

    alpha_u: np.ndarray    # online endpoint's gain
    alpha_v: np.ndarray    # offline endpoint's gain
    status: np.ndarray     # MATCHED_BEFORE / MATCHED_TO_U / UNMATCHED_AFTER
    v_time: np.ndarray     # arrival rank of v's partner, inf if unmatched
    u_partner: np.ndarray  # offline index u matched, -1 if unmatched


class PairSweep:
    """Batched ranking runs where only one edge's two ranks vary.

    Precomputes everything independent of (y_u, y_v): the fixed arrival
    order, per-arrival base offer rows, and curve values of the fixed
    ranks. run() then simulates whole lanes of rank pairs at once.

    Arrival-time ties between u and a fixed online vertex resolve with u
    first (the scalar engine breaks such ties by id); exact ties are
    measure-zero and do not occur for random base ranks.
    """

    def __init__(self, instance: Instance, spec: GainSpec,
                 base_ranks: RankAssignment, online_id: str, offline_id: str):
        if not instance.has_edge(online_id, offline_id):
            raise AnalysisError(f"({online_id}, {offline_id}) is not an edge")
        self.spec = spec
        self.split = spec.is_weight_split
        off_ids = instance.offline_ids
        on_ids = instance.online_ids
        self.nv = len(off_ids)
        self.v_idx = off_ids.index(offline_id)
        self.u_idx = on_ids.index(online_id)
        self.w = np.array([w for _, w in instance.offline], dtype=float)
        self.w_v = float(self.w[self.v_idx])
        rank_of = base_ranks.ranks
        self.y_off = np.array([rank_of[v] for v in off_ids], dtype=float)
        self.y_on = [rank_of[u] for u in on_ids]

        others = [j for j in range(len(on_ids)) if j != self.u_idx]
        others.sort(key=lambda j: (self.y_on[j], on_ids[j]))
        self.others = others
        self.other_y = np.array([self.y_on[j] for j in others], dtype=float)

        off_index = {v: j for j, v in enumerate(off_ids)}
        self.adj = [np.array([off_index[v] for v in instance.neighbors[u]], dtype=np.intp)
                    for u in on_ids]
        # column of v inside each adjacency row, -1 when absent
        self.vcol = []
        for nb in self.adj:
            hits = np.nonzero(nb == self.v_idx)[0]
            self.vcol.append(int(hits[0]) if hits.size else -1)

        if self.split:
            self.c_off = np.asarray(spec.curve(self.y_off), dtype=float)
            self.c_on = {j: float(spec.curve(self.y_on[j])) for j in others}
            self.base_offer = {
                j: self.w[self.adj[j]] * 0.5 * (1.0 - self.c_off[self.adj[j]] + self.c_on[j])
                for j in others}
        else:
            self.static_off = self.w * (1.0 - np.exp(self.y_off - 1.0))
            self.base_offer = {j: self.static_off[self.adj[j]] for j in others}

    def run(self, y_u, y_v) -> SweepResult:
        """Simulate all lanes; y_u and y_v are equal-length 1-d arrays."""
        y_u = np.atleast_1d(np.asarray(y_u, dtype=float))
        y_v = np.atleast_1d(np.asarray(y_v, dtype=float))
        if y_u.shape != y_v.shape:
            raise AnalysisError("y_u and y_v must have equal shapes")
        n = y_u.size
        out = SweepResult(alpha_u=np.zeros(n), alpha_v=np.zeros(n),
                          status=np.full(n, UNMATCHED_AFTER, dtype=np.int8),
                          v_time=np.full(n, np.inf),
                          u_partner=np.full(n, -1, dtype=np.intp))
        if self.split:
            c_u = np.asarray(self.spec.curve(y_u), dtype=float)
            c_v = np.asarray(self.spec.curve(y_v), dtype=float)
        else:
            c_u = c_v = None

        pos = np.searchsorted(self.other_y, y_u, side="left")
        for k in np.unique(pos):
            lanes = np.nonzero(pos == k)[0]
            self._run_group(int(k), lanes, y_u, y_v, c_u, c_v, out)
        return out

    def _v_offer_fixed(self, c_v_g, y_v_g, z: int) -> np.ndarray:
        """Lane-dependent offer of v to the fixed arrival z."""
        if self.split:
            return self.w_v * 0.5 * (1.0 - c_v_g + self.c_on[z])
        return self.w_v * (1.0 - np.exp(y_v_g - 1.0))

    def _run_group(self, k: int, lanes: np.ndarray, y_u, y_v, c_u, c_v,
                   out: SweepResult) -> None:
        m = lanes.size
        y_u_g = y_u[lanes]
        y_v_g = y_v[lanes]
        c_u_g = c_u[lanes] if self.split else None
        c_v_g = c_v[lanes] if self.split else None
        matched = np.zeros((m, self.nv), dtype=bool)
        vt = np.full(m, np.inf)
        vbu = np.zeros(m, dtype=bool)
        upart = np.full(m, -1, dtype=np.intp)

        sequence: list[int | None] = list(self.others[:k]) + [None] + list(self.others[k:])
        for z in sequence:
            arriving_u = z is None
            j = self.u_idx if arriving_u else z
            nb = self.adj[j]
            col = self.vcol[j]
            if nb.size == 0:
                continue
            if arriving_u:
                if self.split:
                    offers = self.w[nb] * 0.5 * (1.0 - self.c_off[nb] + c_u_g[:, None])
                    if col >= 0:
                        offers[:, col] = self.w_v * 0.5 * (1.0 - c_v_g + c_u_g)
                else:
                    offers = np.broadcast_to(self.static_off[nb], (m, nb.size)).copy()
                    if col >= 0:
                        offers[:, col] = self.w_v * (1.0 - np.exp(y_v_g - 1.0))
            else:
                offers = np.broadcast_to(self.base_offer[z], (m, nb.size)).copy()
                if col >= 0:
                    offers[:, col] = self._v_offer_fixed(c_v_g, y_v_g, z)

            rk = np.broadcast_to(self.y_off[nb], offers.shape).copy()
            if col >= 0:
                rk[:, col] = y_v_g
            masked = np.where(matched[:, nb], -np.inf, offers)
            top = masked.max(axis=1)
            # break offer ties toward the smaller offline rank, then the
            # smaller id (columns are id-ordered; argmin takes the first)
            cand = np.where(masked == top[:, None], rk, np.inf)
            sel = np.argmin(cand, axis=1)
            rows = np.nonzero(top > -np.inf)[0]
            chosen = nb[sel[rows]]
            matched[rows, chosen] = True
            took_v = chosen == self.v_idx
            vrows = rows[took_v]
            if arriving_u:
                upart[rows] = chosen
                vt[vrows] = y_u_g[vrows]
                vbu[vrows] = True
            else:
                vt[vrows] = self.y_on[z]

        # gains; share complements are computed exactly as assign_duals does
        alpha_u = np.zeros(m)
        alpha_v = np.zeros(m)
        to_v = upart == self.v_idx
        if np.any(to_v):
            sv = self.w_v * self._share(y_v_g[to_v], c_v_g[to_v] if self.split else None,
                                        y_u_g[to_v], c_u_g[to_v] if self.split else None)
            alpha_v[to_v] = sv
            alpha_u[to_v] = self.w_v - sv
        elsewhere = (upart >= 0) & ~to_v
        if np.any(elsewhere):
            p = upart[elsewhere]
            wp = self.w[p]
            sv = wp * self._share(self.y_off[p], self.c_off[p] if self.split else None,
                                  y_u_g[elsewhere], c_u_g[elsewhere] if self.split else None)
            alpha_u[elsewhere] = wp - sv
        by_other = ~vbu & (vt < np.inf)
        if np.any(by_other):
            t = vt[by_other]
            ct = np.asarray(self.spec.curve(t), dtype=float) if self.split else None
            alpha_v[by_other] = self.w_v * self._share(
                y_v_g[by_other], c_v_g[by_other] if self.split else None, t, ct)

        status = np.full(m, UNMATCHED_AFTER, dtype=np.int8)
        status[vbu] = MATCHED_TO_U
        status[~vbu & (vt < y_u_g)] = MATCHED_BEFORE

        out.alpha_u[lanes] = alpha_u
        out.alpha_v[lanes] = alpha_v
        out.status[lanes] = status
        out.v_time[lanes] = vt
        out.u_partner[lanes] = upart

    def _share(self, x, cx, y, cy):
        """share(x, y) from precomputed curve values where available."""
        if self.split:
            return 0.5 * (cx + 1.0 - cy)
        return np.exp(np.asarray(x, dtype=float) - 1.0)


# -- thresholds -----------------------------------------------------------


@dataclass(frozen=True)
class ThresholdProfile:
    """beta/theta thresholds of one edge over a grid of arrival times.

    For each y_u in the grid: v is matched before u's arrival iff
    y_v < beta, matched to u iff beta < y_v < theta, and unmatched right
    after u's arrival iff y_v > theta. tau is the earliest arrival time
    whose theta equals one (1.0 if none); gamma is beta evaluated at
    arrival time one. fixed_ranks echoes the ranks of all other vertices.
    """

    online_id: str
    offline_id: str
    y_u_grid: tuple[float, ...]
    beta: tuple[float, ...]
    theta: tuple[float, ...]
    tau: float
    gamma: float
    fixed_ranks: dict[str, float]

    def to_csv(self) -> str:
        lines = ["y_u,beta,theta"]
        for y, b, t in zip(self.y_u_grid, self.beta, self.theta):
            lines.append(f"{y!r},{b!r},{t!r}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "online": self.online_id,
            "offline": self.offline_id,
            "y_u": list(self.y_u_grid),
            "beta": list(self.beta),
            "theta": list(self.theta),
            "tau": self.tau,
            "gamma": self.gamma,
        }


def _sweep_statuses(sweeper: PairSweep, y_u: float, pts: np.ndarray) -> np.ndarray:
    res = sweeper.run(np.full(pts.size, y_u), pts)
    return res.status


def _boundary(statuses: np.ndarray, pts: np.ndarray, is_left_side, status_at,
              refine_tol: float) -> float:
    """Refine the boundary where is_left_side(status) flips from True to False.

    statuses/pts come from a coarse sweep; status_at(y_v) is the scalar
    probe. Requires the left-side lanes to form a prefix of the sweep.
    """
    left = is_left_side(statuses)
    if left.all():
        if is_left_side(status_at(1.0)):
            return 1.0
        lo, hi = float(pts[-1]), 1.0
    elif not left.any():
        if not is_left_side(status_at(0.0)):
            return 0.0
        lo, hi = 0.0, float(pts[0])
    else:
        last = int(np.nonzero(left)[0][-1])
        lo, hi = float(pts[last]), float(pts[last + 1])
    return bisect_boundary(lambda y: is_left_side(status_at(y)), lo, hi, refine_tol)


def compute_thresholds(instance: Instance, spec: GainSpec, base_ranks: RankAssignment,
                       online_id: str, offline_id: str, y_u_grid,
                       refine_tol: float = 1e-9, sweep_points: int = 1000,
                       ) -> ThresholdProfile:
    """Locate beta(y_u) and theta(y_u) on a grid of arrival times.

    Per grid point: a coarse sweep of y_v classifies v's status, the sweep
    is checked to split into the three contiguous intervals, and each
    boundary is refined by bisection down to refine_tol. Raises
    ThreeIntervalError when a sweep interleaves statuses, and AnalysisError
    when a profile invariant (beta <= theta, beta non-decreasing, theta
    absorbing at one) fails; theta itself need not be monotone.
    """
    grid = [float(y) for y in y_u_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise AnalysisError("y_u grid must be strictly increasing")
    if not grid or grid[0] < 0.0 or grid[-1] > 1.0:
        raise AnalysisError("y_u grid must be nonempty and inside [0, 1]")
    if refine_tol <= 0.0:
        raise AnalysisError("refine_tol must be positive")
    sweeper = PairSweep(instance, spec, base_ranks, online_id, offline_id)
    pts = (np.arange(sweep_points) + 0.5) / sweep_points

    betas: list[float] = []
    thetas: list[float] = []
    for y_u in grid:
        statuses = _sweep_statuses(sweeper, y_u, pts)
        if np.any(np.diff(statuses) < 0):
            bad = int(np.nonzero(np.diff(statuses) < 0)[0][0])
            raise ThreeIntervalError(
                f"status interleaving at y_u={y_u}: status {statuses[bad]} then "
                f"{statuses[bad + 1]} around y_v={pts[bad]:.6f}")

        def probe(y_v, _y=y_u):
            return edge_status(instance, spec, base_ranks, online_id, offline_id, _y, y_v)

        beta = _boundary(statuses, pts, lambda s: s == MATCHED_BEFORE, probe, refine_tol)
        theta = _boundary(statuses, pts, lambda s: s != UNMATCHED_AFTER, probe, refine_tol)
        betas.append(beta)
        thetas.append(theta)

    slack = 4.0 * refine_tol
    for y, b, t in zip(grid, betas, thetas):
        if not (0.0 <= b <= t + slack and t <= 1.0):
            raise AnalysisError(f"threshold order violated at y_u={y}: beta={b}, theta={t}")
    for (y0, b0), (y1, b1) in zip(zip(grid, betas), zip(grid[1:], betas[1:])):
        if b1 < b0 - slack:
            raise AnalysisError(f"beta decreased from {b0} (y_u={y0}) to {b1} (y_u={y1})")
    saturated = False
    for y, t in zip(grid, thetas):
        if saturated and t != 1.0:
            raise AnalysisError(f"theta left 1.0 at y_u={y} after saturating")
        saturated = saturated or t == 1.0

    tau = _locate_tau(instance, spec, base_ranks, online_id, offline_id, refine_tol)
    gamma = _locate_gamma(instance, spec, base_ranks, online_id, offline_id, refine_tol)
    fixed = {vid: r for vid, r in base_ranks.ranks.items()
             if vid not in (online_id, offline_id)}
    return ThresholdProfile(online_id=online_id, offline_id=offline_id,
                            y_u_grid=tuple(grid), beta=tuple(betas),
                            theta=tuple(thetas), tau=tau, gamma=gamma,
                            fixed_ranks=fixed)


def _locate_tau(instance, spec, base_ranks, online_id, offline_id,
                refine_tol: float = 1e-9) -> float:
    """Earliest arrival time whose theta is one (1.0 when there is none).

    theta(y) = 1 iff v is not left unmatched even at rank one, i.e. the
    status at y_v = 1 is not UNMATCHED_AFTER; saturation is absorbing, so
    the flip point is located by bisection.
    """
    def saturated(y: float) -> bool:
        return edge_status(instance, spec, base_ranks, online_id, offline_id,
                           y, 1.0) != UNMATCHED_AFTER

    if not saturated(1.0):
        return 1.0
    if saturated(0.0):
        return 0.0
    return bisect_boundary(lambda y: not saturated(y), 0.0, 1.0, refine_tol)


def _locate_gamma(instance, spec, base_ranks, online_id, offline_id,
                  refine_tol: float = 1e-9) -> float:
    """beta at arrival time one: the matched-before boundary when u is last."""
    def pre(y_v: float) -> bool:
        return edge_status(instance, spec, base_ranks, online_id, offline_id,
                           1.0, y_v) == MATCHED_BEFORE

    if not pre(0.0):
        return 0.0
    if pre(1.0):
        return 1.0
    return bisect_boundary(pre, 0.0, 1.0, refine_tol)


# -- pair gain ------------------------------------------------------------


@dataclass(frozen=True)
class PairGainEstimate:
    """Midpoint-quadrature estimate of E[alpha_u + alpha_v] / w_v.

    The estimate decomposes exactly into the three regions delimited by
    (tau, gamma): corner (y_u > tau, y_v > gamma, where the pair matches
    each other), v_side (y_v <= gamma: v's gain, plus u's gain when
    y_u > tau) and u_side (y_u <= tau: u's gain, plus v's gain when
    y_v > gamma). The estimate is nonnegative but need not stay below one:
    u's gain can come from heavier neighbors than v.
    """

    online_id: str
    offline_id: str
    grid_n: int
    estimate: float
    corner: float
    v_side: float
    u_side: float
    tau: float
    gamma: float

    def to_json_dict(self) -> dict:
        return {
            "online": self.online_id,
            "offline": self.offline_id,
            "grid_n": self.grid_n,
            "estimate": self.estimate,
            "corner": self.corner,
            "v_side": self.v_side,
            "u_side": self.u_side,
            "tau": self.tau,
            "gamma": self.gamma,
        }


def pair_gain(instance: Instance, spec: GainSpec, base_ranks: RankAssignment,
              online_id: str, offline_id: str, grid_n: int,
              refine_tol: float = 1e-9) -> PairGainEstimate:
    """Estimate the pair's expected combined gain over uniform (y_u, y_v).

    Midpoint rule on a grid_n x grid_n grid of full re-simulations; the gain
    surface is piecewise smooth, so the quadrature error decays like
    1/grid_n along the status boundaries. Requires w_v > 0 (the estimate is
    normalized by the offline weight).
    """
    if grid_n < 2:
        raise AnalysisError("grid_n must be >= 2")
    w_v = instance.weights.get(offline_id)
    if not instance.has_edge(online_id, offline_id):
        raise AnalysisError(f"({online_id}, {offline_id}) is not an edge")
    if w_v == 0.0:
        raise AnalysisError(f"pair gain of zero-weight vertex {offline_id} is undefined")

    sweeper = PairSweep(instance, spec, base_ranks, online_id, offline_id)
    mids = (np.arange(grid_n) + 0.5) / grid_n
    y_u = np.repeat(mids, grid_n)
    y_v = np.tile(mids, grid_n)
    res = sweeper.run(y_u, y_v)

    tau = _locate_tau(instance, spec, base_ranks, online_id, offline_id, refine_tol)
    gamma = _locate_gamma(instance, spec, base_ranks, online_id, offline_id, refine_tol)

    cu = y_u > tau
    cv = y_v > gamma
    norm = 1.0 / (grid_n * grid_n * w_v)
    corner = float(np.sum((res.alpha_u + res.alpha_v) * (cu & cv))) * norm
    v_side = float(np.sum(res.alpha_v * ~cv) + np.sum(res.alpha_u * (~cv & cu))) * norm
    u_side = float(np.sum(res.alpha_u * ~cu) + np.sum(res.alpha_v * (~cu & cv))) * norm
    estimate = float(np.sum(res.alpha_u + res.alpha_v)) * norm
    return PairGainEstimate(online_id=online_id, offline_id=offline_id,
                            grid_n=grid_n, estimate=estimate, corner=corner,
                            v_side=v_side, u_side=u_side, tau=tau, gamma=gamma)
