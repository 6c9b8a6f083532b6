import numpy as np
import pytest

from rankmatch.core import InstanceError, build_instance, sample_ranks
from rankmatch.gains import half_exp
from rankmatch.generators import random_instance
from rankmatch.offline import brute_force_opt, solve_opt
from rankmatch.ranking import run_ranking


def test_single_edge():
    inst = build_instance([("v1", 1.0)], [("u1", ["v1"])])
    assert solve_opt(inst).value == 1.0
    assert brute_force_opt(inst).value == 1.0


def test_no_edges():
    inst = build_instance([("v1", 1.0)], [("u1", [])])
    assert solve_opt(inst).value == 0.0
    assert solve_opt(inst).pairs == ()
    assert brute_force_opt(inst).value == 0.0


def test_hand_worked_instance():
    # u1-v1, u2-v1, u2-v2 with weights 3 and 2: take u1-v1 and u2-v2
    inst = build_instance([("v1", 3.0), ("v2", 2.0)],
                          [("u1", ["v1"]), ("u2", ["v1", "v2"])])
    res = solve_opt(inst)
    assert res.value == 5.0
    assert set(res.pairs) == {("u1", "v1"), ("u2", "v2")}
    assert brute_force_opt(inst).value == 5.0


def test_empty_sides():
    assert solve_opt(build_instance([], [])).value == 0.0
    assert brute_force_opt(build_instance([("v1", 2.0)], [])).value == 0.0


def test_heavier_side_preferred_over_cardinality():
    # one huge vertex beats two small ones when they conflict
    inst = build_instance([("v1", 10.0), ("v2", 0.1), ("v3", 0.1)],
                          [("u1", ["v1", "v2"]), ("u2", ["v1", "v3"])])
    assert solve_opt(inst).value == pytest.approx(10.1)


def test_brute_force_size_guard():
    big = build_instance([(f"v{i}", 1.0) for i in range(11)], [])
    with pytest.raises(InstanceError, match="too large"):
        brute_force_opt(big)


def test_oracle_agreement_random_instances():
    rng = np.random.default_rng(10)
    for trial in range(250):
        inst = random_instance(rng, max_side=8, weighted=True, min_edges=0)
        assert solve_opt(inst).value == brute_force_opt(inst).value


def test_opt_reported_matching_is_feasible_and_adds_up():
    rng = np.random.default_rng(11)
    for trial in range(100):
        inst = random_instance(rng, max_side=7, weighted=True, min_edges=0)
        res = solve_opt(inst)
        seen_u, seen_v = set(), set()
        total = 0.0
        for u, v in res.pairs:
            assert inst.has_edge(u, v)
            assert u not in seen_u and v not in seen_v
            seen_u.add(u)
            seen_v.add(v)
            total += inst.weights[v]
        assert res.value == pytest.approx(total, abs=1e-12)


def test_opt_dominates_online_algorithm():
    rng = np.random.default_rng(12)
    for trial in range(150):
        inst = random_instance(rng, weighted=True)
        opt = solve_opt(inst).value
        result, _ = run_ranking(inst, half_exp(), sample_ranks(inst, (12, trial)),
                                collect_offers=False)
        assert result.total_weight <= opt + 1e-12
