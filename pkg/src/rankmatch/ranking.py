"""Deterministic simulation of weighted ranking for one rank assignment.

Online vertices are processed in increasing arrival time. Each arrival u
sees an offer w_v * (1 - share(y_v, y_u)) from every still-unmatched
neighbor v and takes the highest offer; offers never go negative, so an
arrival with at least one unmatched neighbor always matches. Offer ties
(measure zero under continuous ranks, but reachable once a share curve
saturates) break toward the smaller offline rank, then the smaller id.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .core import DualShares, Instance, MatchingResult, RankAssignment, matching_result
from .gains import GainSpec

UNMATCHED = math.inf


@dataclass(frozen=True)
class ArrivalRecord:
    """One arrival: the offers it saw and the neighbor it took."""

    online_id: str
    arrival_rank: float
    offers: tuple[tuple[str, float], ...]  # (offline id, offered value), id order
    chosen: str | None


@dataclass(frozen=True)
class SimulationTrace:
    """Arrival-by-arrival record of one ranking run.

    match_time maps every offline id to the arrival rank of its partner
    (math.inf when it ends unmatched). arrivals is empty when the run was
    made with collect_offers=False.
    """

    arrivals: tuple[ArrivalRecord, ...]
    match_time: dict[str, float]

    def to_json_lines(self) -> str:
        """One JSON object per arrival: online id, rank, offers, choice."""
        lines = []
        for rec in self.arrivals:
            lines.append(json.dumps({
                "online": rec.online_id,
                "arrival_rank": rec.arrival_rank,
                "offers": [[v, o] for v, o in rec.offers],
                "chosen": rec.chosen,
            }, sort_keys=True))
        return "\n".join(lines)


def run_ranking(instance: Instance, spec: GainSpec, ranks: RankAssignment,
                collect_offers: bool = True) -> tuple[MatchingResult, SimulationTrace]:
    """Simulate one run; pure function of its inputs.

    The per-arrival scan over unmatched neighbors is linear; at desk scale
    no priority structure is worth the bookkeeping.
    """
    rank_of = ranks.ranks
    offline_ids = instance.offline_ids
    weights = instance.weights

    # offered value per still-unmatched offline vertex, as a function of the
    # arrival's rank; precompute the rank-dependent pieces once per run
    if spec.is_weight_split:
        curve_of = {v: spec.curve_scalar(rank_of[v]) for v in offline_ids}

        def offer(v: str, y_u_curve: float) -> float:
            return weights[v] * 0.5 * (1.0 - curve_of[v] + y_u_curve)

        def arrival_key(u: str) -> float:
            return spec.curve_scalar(rank_of[u])
    else:
        static = {v: weights[v] * (1.0 - math.exp(rank_of[v] - 1.0)) for v in offline_ids}

        def offer(v: str, y_u_curve: float) -> float:
            return static[v]

        def arrival_key(u: str) -> float:
            return 0.0

    order = sorted(instance.online_ids, key=lambda u: (rank_of[u], u))
    unmatched = set(offline_ids)
    pairs: list[tuple[str, str]] = []
    match_time = {v: UNMATCHED for v in offline_ids}
    records: list[ArrivalRecord] = []

    for u in order:
        y_u = rank_of[u]
        key = arrival_key(u)
        best_v: str | None = None
        best_o = -1.0
        best_r = math.inf
        offers: list[tuple[str, float]] = []
        for v in instance.neighbors[u]:
            if v not in unmatched:
                continue
            o = offer(v, key)
            if collect_offers:
                offers.append((v, o))
            # maximize the offer, then prefer the smaller offline rank, then id
            if (best_v is None or o > best_o
                    or (o == best_o and (rank_of[v], v) < (best_r, best_v))):
                best_v, best_o, best_r = v, o, rank_of[v]
        if best_v is not None:
            unmatched.discard(best_v)
            pairs.append((u, best_v))
            match_time[best_v] = y_u
        if collect_offers:
            records.append(ArrivalRecord(online_id=u, arrival_rank=y_u,
                                         offers=tuple(offers), chosen=best_v))

    result = matching_result(instance, pairs)
    return result, SimulationTrace(arrivals=tuple(records), match_time=match_time)


def assign_duals(instance: Instance, result: MatchingResult, spec: GainSpec,
                 ranks: RankAssignment) -> DualShares:
    """Split each matched edge's weight into the two endpoint gains.

    The offline endpoint keeps w_v * share(y_v, y_u); the online endpoint
    gets the complement w_v - that, which equals w_v * share(y_u, y_v) for
    weight-splitting specs and is the static-price utility for the
    adversarial baseline. Computing the online share as the complement keeps
    every pair's accounting identity exact. Unmatched vertices get zero.
    """
    rank_of = ranks.ranks
    weights = instance.weights
    alpha = {vid: 0.0 for vid in instance.all_ids()}
    for u, v in result.pairs:
        w = weights[v]
        share_v = w * spec.share_scalar(rank_of[v], rank_of[u])
        alpha[v] = share_v
        alpha[u] = w - share_v
    return DualShares(alpha=alpha)
