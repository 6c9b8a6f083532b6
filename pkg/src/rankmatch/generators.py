"""Seeded instance generators for experiments and randomized tests."""

from __future__ import annotations

import math
from typing import Mapping

import numpy as np

from .core import Instance, build_instance


class GeneratorError(ValueError):
    """Unknown generator kind or invalid parameters."""


def _ids(prefix: str, n: int) -> list[str]:
    width = len(str(n))
    return [f"{prefix}{i + 1:0{width}d}" for i in range(n)]


def _sizes(params: Mapping) -> tuple[int, int]:
    n = params.get("n")
    n_online = int(params.get("n_online", n if n is not None else 0))
    n_offline = int(params.get("n_offline", n if n is not None else 0))
    if n_online < 1 or n_offline < 1:
        raise GeneratorError("need n >= 1 (or n_online/n_offline >= 1)")
    return n_online, n_offline


def _edge_prob(params: Mapping) -> float:
    p = float(params.get("p", 0.5))
    if not (0.0 <= p <= 1.0):
        raise GeneratorError(f"edge probability outside [0, 1]: {p}")
    return p


def generate_instance(kind: str, params: Mapping, seed) -> Instance:
    """Deterministic instance from (kind, params, seed).

    Kinds:
      complete(n): every online adjacent to every offline, unit weights.
      upper_triangular(n): online i adjacent to offline j for j >= i, unit
        weights; the classic adversarial family for greedy-style matching.
      random(n, p): each edge present independently with probability p,
        unit weights.
      weighted_random(n, p): random edges plus log-uniform weights in
        [0.1, 10] (weights are drawn before edges, so the edge pattern for
        a seed differs from random's).
    random/weighted_random also accept n_online/n_offline for rectangular
    shapes.
    """
    if kind == "complete":
        n_u, n_v = _sizes(params)
        offl = _ids("v", n_v)
        return build_instance([(v, 1.0) for v in offl],
                              [(u, offl) for u in _ids("u", n_u)])
    if kind == "upper_triangular":
        n = int(params.get("n", 0))
        if n < 1:
            raise GeneratorError("need n >= 1")
        offl = _ids("v", n)
        return build_instance([(v, 1.0) for v in offl],
                              [(u, offl[i:]) for i, u in enumerate(_ids("u", n))])
    if kind in ("random", "weighted_random"):
        n_u, n_v = _sizes(params)
        p = _edge_prob(params)
        rng = np.random.default_rng(seed)
        if kind == "weighted_random":
            weights = np.exp(rng.uniform(math.log(0.1), math.log(10.0), size=n_v))
        else:
            weights = np.ones(n_v)
        adj = rng.random((n_u, n_v)) < p
        offl = _ids("v", n_v)
        online = [(u, [offl[j] for j in range(n_v) if adj[i, j]])
                  for i, u in enumerate(_ids("u", n_u))]
        return build_instance(list(zip(offl, (float(w) for w in weights))), online)
    raise GeneratorError(f"unknown generator kind {kind!r}")


def random_instance(rng: np.random.Generator, max_side: int = 6, p: float = 0.5,
                    weighted: bool = True, min_edges: int = 1) -> Instance:
    """Random small instance for property tests; redraws until it has edges.

    Sides are uniform on 1..max_side; weights log-uniform in [0.1, 10] when
    weighted, else 1. Driven by the caller's rng, so sequences of draws are
    reproducible from one seed.
    """
    while True:
        n_u = int(rng.integers(1, max_side + 1))
        n_v = int(rng.integers(1, max_side + 1))
        if weighted:
            weights = np.exp(rng.uniform(math.log(0.1), math.log(10.0), size=n_v))
        else:
            weights = np.ones(n_v)
        adj = rng.random((n_u, n_v)) < p
        if adj.sum() < min_edges:
            continue
        offl = _ids("v", n_v)
        online = [(u, [offl[j] for j in range(n_v) if adj[i, j]])
                  for i, u in enumerate(_ids("u", n_u))]
        return build_instance(list(zip(offl, (float(w) for w in weights))), online)
