import json
import math

import numpy as np
import pytest

from rankmatch.core import (RankAssignment, build_instance, check_dual_shares,
                            sample_ranks, validate_rank_assignment)
from rankmatch.gains import adversarial_baseline, half_exp, simple_exp
from rankmatch.generators import random_instance
from rankmatch.ranking import assign_duals, run_ranking


def ranks_of(inst, mapping):
    return validate_rank_assignment(inst, {"ranks": mapping})


def reference_engine(instance, spec, ranks, collect_offers=False):
    """Independent re-implementation of the arrival loop used as an oracle.

    Computes offers straight from share() without the precomputed-curve
    shortcut of the production engine; same tie-break (rank, then id).
    """
    rank_of = ranks.ranks
    unmatched = set(instance.offline_ids)
    pairs = []
    match_time = {v: math.inf for v in instance.offline_ids}
    for u in sorted(instance.online_ids, key=lambda x: (rank_of[x], x)):
        options = []
        for v in instance.neighbors[u]:
            if v in unmatched:
                offer = instance.weights[v] * (
                    1.0 - spec.share_scalar(rank_of[v], rank_of[u]))
                options.append((-offer, rank_of[v], v))
        if options:
            options.sort()
            v = options[0][2]
            unmatched.discard(v)
            pairs.append((u, v))
            match_time[v] = rank_of[u]
    return pairs, match_time


def test_single_edge_always_matches():
    inst = build_instance([("v1", 1.0)], [("u1", ["v1"])])
    for seed in range(5):
        result, trace = run_ranking(inst, half_exp(), sample_ranks(inst, seed))
        assert result.pairs == (("u1", "v1"),)
        assert result.total_weight == 1.0
        assert trace.match_time["v1"] == trace.arrivals[0].arrival_rank


def test_complete_two_by_two_is_perfect():
    inst = build_instance([("v1", 1.0), ("v2", 1.0)],
                          [("u1", ["v1", "v2"]), ("u2", ["v1", "v2"])])
    for spec in (half_exp(), simple_exp(), adversarial_baseline()):
        for seed in range(25):
            result, _ = run_ranking(inst, spec, sample_ranks(inst, seed))
            assert result.total_weight == 2.0


def test_hand_worked_offers_and_choice():
    # one arrival, two offline: the heavier far vertex wins
    inst = build_instance([("v1", 1.0), ("v2", 10.0)], [("u1", ["v1", "v2"])])
    ranks = ranks_of(inst, {"v1": 0.1, "v2": 0.9, "u1": 0.5})
    result, trace = run_ranking(inst, half_exp(), ranks)
    offers = dict(trace.arrivals[0].offers)
    assert offers["v1"] == pytest.approx(0.6358875881561201, abs=1e-15)
    assert offers["v2"] == pytest.approx(4.121803176750321, abs=1e-15)
    assert result.pairs == (("u1", "v2"),)

    duals = assign_duals(inst, result, half_exp(), ranks)
    assert duals.alpha["u1"] == pytest.approx(4.121803176750321, abs=1e-12)
    assert duals.alpha["v2"] == pytest.approx(5.878196823249679, abs=1e-12)
    assert duals.alpha["u1"] + duals.alpha["v2"] == 10.0
    assert duals.alpha["v1"] == 0.0


def test_single_edge_duals_complement_exactly():
    inst = build_instance([("v1", 1.0)], [("u1", ["v1"])])
    for seed in range(20):
        ranks = sample_ranks(inst, seed)
        result, _ = run_ranking(inst, half_exp(), ranks)
        duals = assign_duals(inst, result, half_exp(), ranks)
        assert duals.alpha["u1"] + duals.alpha["v1"] == 1.0


def test_empty_matching_all_zero_duals():
    inst = build_instance([("v1", 1.0)], [("u1", [])])
    ranks = sample_ranks(inst, 0)
    result, trace = run_ranking(inst, half_exp(), ranks)
    assert result.pairs == ()
    assert trace.match_time["v1"] == math.inf
    duals = assign_duals(inst, result, half_exp(), ranks)
    assert all(a == 0.0 for a in duals.alpha.values())


def test_arrival_order_strictly_increasing():
    rng = np.random.default_rng(0)
    for trial in range(20):
        inst = random_instance(rng)
        _, trace = run_ranking(inst, half_exp(), sample_ranks(inst, trial))
        times = [rec.arrival_rank for rec in trace.arrivals]
        assert all(b > a for a, b in zip(times, times[1:]))


def test_chosen_maximizes_offer_in_trace():
    rng = np.random.default_rng(1)
    for trial in range(30):
        inst = random_instance(rng)
        _, trace = run_ranking(inst, half_exp(), sample_ranks(inst, (1, trial)))
        for rec in trace.arrivals:
            if rec.chosen is None:
                assert not rec.offers
                continue
            best = max(o for _, o in rec.offers)
            assert dict(rec.offers)[rec.chosen] == best


def test_agrees_with_reference_engine():
    rng = np.random.default_rng(2)
    for trial in range(120):
        weighted = trial % 2 == 0
        inst = random_instance(rng, weighted=weighted)
        spec = (half_exp(), simple_exp(), adversarial_baseline())[trial % 3]
        ranks = sample_ranks(inst, (2, trial))
        result, trace = run_ranking(inst, spec, ranks, collect_offers=False)
        pairs, match_time = reference_engine(inst, spec, ranks)
        assert list(result.pairs) == pairs
        assert trace.match_time == match_time


def test_zero_weight_vertex_can_absorb_a_match():
    inst = build_instance([("v1", 0.0)], [("u1", ["v1"])])
    result, _ = run_ranking(inst, half_exp(), sample_ranks(inst, 3))
    assert result.pairs == (("u1", "v1"),)
    assert result.total_weight == 0.0


def test_offer_tie_breaks_to_smaller_rank_then_id():
    # saturated simple-exp curve: both unit-weight offers are exactly equal
    inst = build_instance([("v1", 1.0), ("v2", 1.0)], [("u1", ["v1", "v2"])])
    ranks = ranks_of(inst, {"v1": 0.7, "v2": 0.6, "u1": 0.2})
    result, trace = run_ranking(inst, simple_exp(), ranks)
    offers = dict(trace.arrivals[0].offers)
    assert offers["v1"] == offers["v2"]
    assert result.pairs == (("u1", "v2"),)  # smaller rank wins
    # equal ranks cannot happen through validation; id order is exercised
    # via the unchecked override path in the analysis module


def test_dual_accounting_random_trials():
    rng = np.random.default_rng(3)
    for trial in range(300):
        inst = random_instance(rng, weighted=True)
        spec = (half_exp(), simple_exp(), adversarial_baseline())[trial % 3]
        ranks = sample_ranks(inst, (3, trial))
        result, _ = run_ranking(inst, spec, ranks, collect_offers=False)
        duals = assign_duals(inst, result, spec, ranks)
        check_dual_shares(inst, result, duals, tol=1e-12)


def test_adversarial_choice_rule_static():
    # offers under the adversarial baseline do not depend on arrival time:
    # shifting u inside its inter-arrival gap cannot change anything
    rng = np.random.default_rng(4)
    for trial in range(30):
        inst = random_instance(rng, weighted=True)
        ranks = sample_ranks(inst, (4, trial))
        base, _ = run_ranking(inst, adversarial_baseline(), ranks,
                              collect_offers=False)
        times = sorted(ranks.ranks[u] for u in inst.online_ids)
        u = inst.online_ids[int(rng.integers(len(inst.online_ids)))]
        y = ranks.ranks[u]
        i = times.index(y)
        lo = times[i - 1] if i > 0 else 0.0
        hi = times[i + 1] if i + 1 < len(times) else 1.0
        for frac in (0.25, 0.5, 0.75):
            shifted = lo + (hi - lo) * frac
            got, _ = run_ranking(inst, adversarial_baseline(),
                                 ranks.override({u: shifted}),
                                 collect_offers=False)
            assert got.pairs == base.pairs


def test_trace_json_lines_schema():
    inst = build_instance([("v1", 1.0), ("v2", 2.0)],
                          [("u1", ["v1", "v2"]), ("u2", ["v2"])])
    ranks = ranks_of(inst, {"v1": 0.3, "v2": 0.6, "u1": 0.5, "u2": 0.8})
    _, trace = run_ranking(inst, half_exp(), ranks)
    lines = trace.to_json_lines().splitlines()
    assert len(lines) == 2
    first = json.loads(lines[0])
    assert set(first) == {"online", "arrival_rank", "offers", "chosen"}
    assert first["online"] == "u1"
    assert isinstance(first["offers"], list)
