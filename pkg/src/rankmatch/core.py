"""Core domain types: instances, rank assignments, matchings, dual shares.

No algorithmic logic lives here, only validated immutable data and its JSON
round-trips. Ids are opaque strings; every deterministic iteration in the
package walks vertices in lexicographic id order so downstream tie-breaking
is reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np


class InstanceError(ValueError):
    """Malformed instance description."""


class RankError(ValueError):
    """Malformed rank assignment."""


@dataclass(frozen=True)
class Instance:
    """A bipartite instance: weighted offline vertices, online adjacency.

    offline: ((id, weight), ...) sorted by id; weights are non-negative.
    online: ((id, neighbor_ids), ...) sorted by id; neighbor tuples are
    sorted and only reference offline ids, so the edge set is bipartite by
    construction. Instances are immutable and safe to share across workers.
    """

    offline: tuple[tuple[str, float], ...]
    online: tuple[tuple[str, tuple[str, ...]], ...]

    @cached_property
    def offline_ids(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.offline)

    @cached_property
    def online_ids(self) -> tuple[str, ...]:
        return tuple(u for u, _ in self.online)

    @cached_property
    def weights(self) -> dict[str, float]:
        return {v: w for v, w in self.offline}

    @cached_property
    def neighbors(self) -> dict[str, tuple[str, ...]]:
        return {u: nbs for u, nbs in self.online}

    @cached_property
    def edge_count(self) -> int:
        return sum(len(nbs) for _, nbs in self.online)

    def has_edge(self, online_id: str, offline_id: str) -> bool:
        return offline_id in set(self.neighbors.get(online_id, ()))

    def all_ids(self) -> tuple[str, ...]:
        return self.offline_ids + self.online_ids

    def to_json_dict(self) -> dict:
        return {
            "offline": [{"id": v, "weight": w} for v, w in self.offline],
            "online": [{"id": u, "neighbors": list(nbs)} for u, nbs in self.online],
        }


def validate_instance(raw: Mapping) -> Instance:
    """Build an Instance from {"offline": [...], "online": [...]} data.

    Raises InstanceError naming the offending id on duplicate ids, unknown
    neighbor ids, or negative weights. Zero weights are allowed; a zero
    weight vertex contributes nothing but may still absorb a match.
    """
    if not isinstance(raw, Mapping):
        raise InstanceError("instance description must be a mapping")
    offline_raw = raw.get("offline", [])
    online_raw = raw.get("online", [])

    seen: set[str] = set()
    offline = []
    for entry in offline_raw:
        vid, weight = _parse_offline(entry)
        if vid in seen:
            raise InstanceError(f"duplicate id {vid}")
        seen.add(vid)
        if not math.isfinite(weight):
            raise InstanceError(f"non-finite weight {vid}")
        if weight < 0.0:
            raise InstanceError(f"negative weight {vid}")
        offline.append((vid, weight))
    offline.sort(key=lambda p: p[0])
    offline_ids = {v for v, _ in offline}

    online = []
    for entry in online_raw:
        uid, nbs = _parse_online(entry)
        if uid in seen:
            raise InstanceError(f"duplicate id {uid}")
        seen.add(uid)
        for n in nbs:
            if n not in offline_ids:
                raise InstanceError(f"unknown neighbor {n}")
        online.append((uid, tuple(sorted(set(nbs)))))
    online.sort(key=lambda p: p[0])

    return Instance(offline=tuple(offline), online=tuple(online))


def _parse_offline(entry) -> tuple[str, float]:
    if isinstance(entry, Mapping):
        return str(entry["id"]), float(entry["weight"])
    vid, weight = entry
    return str(vid), float(weight)


def _parse_online(entry) -> tuple[str, list[str]]:
    if isinstance(entry, Mapping):
        return str(entry["id"]), [str(n) for n in entry["neighbors"]]
    uid, nbs = entry
    return str(uid), [str(n) for n in nbs]


def build_instance(offline: Iterable[tuple[str, float]],
                   online: Iterable[tuple[str, Iterable[str]]]) -> Instance:
    """Convenience constructor from (id, weight) and (id, neighbors) pairs."""
    return validate_instance({
        "offline": [{"id": v, "weight": w} for v, w in offline],
        "online": [{"id": u, "neighbors": list(nbs)} for u, nbs in online],
    })


def instance_from_json(obj: Mapping | str) -> Instance:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return validate_instance(obj)


@dataclass(frozen=True)
class RankAssignment:
    """Rank (offline) or arrival time (online) for every vertex, in [0, 1].

    Treat as immutable after construction. Construction only range-checks;
    coverage and distinctness are enforced by validate_rank_assignment, the
    entry point for user-supplied assignments. Internally derived
    assignments (grid sweeps overriding two ranks) skip the distinctness
    check because equal ranks across the two sides are harmless: arrival
    order ties break by id and offer ties break by (rank, id).
    """

    ranks: dict[str, float]

    def __post_init__(self):
        for vid, r in self.ranks.items():
            if not (0.0 <= r <= 1.0):
                raise RankError(f"rank of {vid} outside [0, 1]: {r}")

    def override(self, changes: Mapping[str, float]) -> "RankAssignment":
        """New assignment with some ranks replaced (no distinctness check)."""
        ranks = dict(self.ranks)
        ranks.update(changes)
        return RankAssignment(ranks)

    def to_json_dict(self) -> dict:
        return {"ranks": dict(sorted(self.ranks.items()))}


def validate_rank_assignment(instance: Instance, raw: Mapping) -> RankAssignment:
    """Validate coverage, range and pairwise distinctness of user ranks."""
    ranks = raw.get("ranks", raw) if isinstance(raw, Mapping) else raw
    ids = instance.all_ids()
    missing = [i for i in ids if i not in ranks]
    if missing:
        raise RankError(f"missing rank for {missing[0]}")
    extra = [i for i in ranks if i not in set(ids)]
    if extra:
        raise RankError(f"rank for unknown vertex {sorted(extra)[0]}")
    by_value: dict[float, str] = {}
    for vid in ids:
        r = float(ranks[vid])
        if r in by_value:
            raise RankError(f"tied ranks for {by_value[r]} and {vid}: {r}")
        by_value[r] = vid
    return RankAssignment({vid: float(ranks[vid]) for vid in ids})


def ranks_from_json(instance: Instance, obj: Mapping | str) -> RankAssignment:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return validate_rank_assignment(instance, obj)


def sample_ranks(instance: Instance, seed) -> RankAssignment:
    """Independent uniform [0, 1] ranks for every vertex.

    Deterministic function of (instance, seed): vertices are filled in
    sorted id order (offline first) from a PCG64 stream seeded with seed.
    seed may be an int or a tuple of ints (stream splitting for trials).
    Sampled ranks carry 53 bits, so ties effectively never occur.
    """
    rng = np.random.default_rng(seed)
    ids = instance.all_ids()
    vals = rng.random(len(ids))
    return RankAssignment({vid: float(r) for vid, r in zip(ids, vals)})


@dataclass(frozen=True)
class MatchingResult:
    """A matching in arrival order plus per-side matched sets.

    total_weight is the sum of matched offline weights; every online and
    offline id occurs at most once across pairs.
    """

    pairs: tuple[tuple[str, str], ...]
    matched_online: frozenset[str]
    matched_offline: frozenset[str]
    total_weight: float


def matching_result(instance: Instance, pairs: Iterable[tuple[str, str]]) -> MatchingResult:
    """Validated MatchingResult from (online, offline) pairs."""
    pairs = tuple(pairs)
    m_on = [u for u, _ in pairs]
    m_off = [v for _, v in pairs]
    if len(set(m_on)) != len(m_on):
        raise InstanceError("online vertex matched twice")
    if len(set(m_off)) != len(m_off):
        raise InstanceError("offline vertex matched twice")
    weights = instance.weights
    for u, v in pairs:
        if not instance.has_edge(u, v):
            raise InstanceError(f"pair ({u}, {v}) is not an edge")
    total = math.fsum(weights[v] for v in m_off)
    return MatchingResult(pairs=pairs, matched_online=frozenset(m_on),
                          matched_offline=frozenset(m_off), total_weight=total)


@dataclass(frozen=True)
class DualShares:
    """Per-vertex gain split of a matching: alpha[id] for every vertex.

    Unmatched vertices hold exactly zero; within each matched pair the two
    shares sum to the full edge weight.
    """

    alpha: dict[str, float]

    def total(self) -> float:
        return math.fsum(self.alpha.values())


def check_dual_shares(instance: Instance, result: MatchingResult,
                      shares: DualShares, tol: float = 1e-12) -> None:
    """Assert the accounting identities of a DualShares against its matching.

    Raises AssertionError on: a missing vertex, a nonzero share on an
    unmatched vertex, a pair whose shares do not sum to its weight (within
    tol relative to the weight scale), or a grand total drifting from the
    matching's total weight by more than tol.
    """
    alpha = shares.alpha
    matched = result.matched_online | result.matched_offline
    for vid in instance.all_ids():
        assert vid in alpha, f"missing dual share for {vid}"
        if vid not in matched:
            assert alpha[vid] == 0.0, f"unmatched {vid} has nonzero share"
        else:
            assert alpha[vid] >= 0.0, f"negative share for {vid}"
    weights = instance.weights
    for u, v in result.pairs:
        w = weights[v]
        assert abs((alpha[u] + alpha[v]) - w) <= tol * max(1.0, w), \
            f"pair ({u}, {v}) shares {alpha[u]} + {alpha[v]} != weight {w}"
    assert abs(shares.total() - result.total_weight) <= tol * max(1.0, result.total_weight), \
        f"share total {shares.total()} != matching weight {result.total_weight}"
