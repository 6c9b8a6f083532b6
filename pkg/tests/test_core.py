import json
import math

import numpy as np
import pytest

from rankmatch.core import (DualShares, InstanceError, RankError,
                            build_instance, check_dual_shares,
                            instance_from_json, matching_result,
                            ranks_from_json, sample_ranks, validate_instance,
                            validate_rank_assignment)


def tiny():
    return build_instance([("v1", 1.0)], [("u1", ["v1"])])


def test_validate_smallest_instance():
    inst = validate_instance({"offline": [{"id": "v1", "weight": 1.0}],
                              "online": [{"id": "u1", "neighbors": ["v1"]}]})
    assert inst.edge_count == 1
    assert inst.weights == {"v1": 1.0}
    assert inst.neighbors == {"u1": ("v1",)}


def test_validate_negative_weight_names_vertex():
    with pytest.raises(InstanceError, match="negative weight v1"):
        build_instance([("v1", -2.0)], [])


def test_validate_unknown_neighbor_names_vertex():
    with pytest.raises(InstanceError, match="unknown neighbor v9"):
        build_instance([("v1", 1.0)], [("u1", ["v9"])])


def test_validate_duplicate_ids():
    with pytest.raises(InstanceError, match="duplicate id v1"):
        build_instance([("v1", 1.0), ("v1", 2.0)], [])
    with pytest.raises(InstanceError, match="duplicate id u1"):
        build_instance([("v1", 1.0)], [("u1", ["v1"]), ("u1", [])])
    # ids must also be unique across sides, or the rank map is ambiguous
    with pytest.raises(InstanceError, match="duplicate id x"):
        build_instance([("x", 1.0)], [("x", [])])


def test_validate_rejects_nan_weight():
    with pytest.raises(InstanceError):
        build_instance([("v1", float("nan"))], [])


def test_zero_weight_allowed():
    inst = build_instance([("v1", 0.0)], [("u1", ["v1"])])
    assert inst.weights["v1"] == 0.0


def test_neighbors_deduped_and_sorted():
    inst = build_instance([("v1", 1.0), ("v2", 1.0)],
                          [("u1", ["v2", "v1", "v2"])])
    assert inst.neighbors["u1"] == ("v1", "v2")


def test_instance_json_round_trip_bit_exact():
    weights = [0.1, 1e-300, 0.6065306597126334, 7.2e15, 1 / 3]
    inst = build_instance([(f"v{i}", w) for i, w in enumerate(weights)],
                          [("u1", [f"v{i}" for i in range(len(weights))])])
    back = instance_from_json(json.dumps(inst.to_json_dict()))
    assert back == inst
    for i, w in enumerate(weights):
        assert back.weights[f"v{i}"] == w  # bit-exact


def test_rank_assignment_json_round_trip_bit_exact():
    inst = tiny()
    ranks = validate_rank_assignment(inst, {"ranks": {"v1": 1 / 3, "u1": 0.7}})
    back = ranks_from_json(inst, json.dumps(ranks.to_json_dict()))
    assert back.ranks == ranks.ranks


def test_rank_validation_errors():
    inst = tiny()
    with pytest.raises(RankError, match="missing rank"):
        validate_rank_assignment(inst, {"ranks": {"v1": 0.5}})
    with pytest.raises(RankError, match="unknown vertex"):
        validate_rank_assignment(inst, {"ranks": {"v1": 0.5, "u1": 0.6, "zz": 0.1}})
    with pytest.raises(RankError, match="tied ranks"):
        validate_rank_assignment(inst, {"ranks": {"v1": 0.5, "u1": 0.5}})
    with pytest.raises(RankError, match="outside"):
        validate_rank_assignment(inst, {"ranks": {"v1": 1.5, "u1": 0.5}})


def test_sample_ranks_deterministic():
    inst = build_instance([("v1", 1.0), ("v2", 2.0)],
                          [("u1", ["v1"]), ("u2", ["v2"])])
    a = sample_ranks(inst, 123)
    b = sample_ranks(inst, 123)
    assert a.ranks == b.ranks
    c = sample_ranks(inst, 124)
    assert a.ranks != c.ranks


def test_sample_ranks_uniform_mean():
    # Monte-Carlo oracle: 1e5 draws of one vertex's rank
    inst = tiny()
    vals = [sample_ranks(inst, s).ranks["v1"] for s in range(100_000)]
    assert abs(np.mean(vals) - 0.5) < 0.01


def test_sample_ranks_independent_across_vertices():
    inst = build_instance([("v1", 1.0), ("v2", 1.0)], [])
    xs, ys = [], []
    for s in range(100_000):
        r = sample_ranks(inst, s).ranks
        xs.append(r["v1"])
        ys.append(r["v2"])
    rho = np.corrcoef(xs, ys)[0, 1]
    assert abs(rho) < 0.02


def test_matching_result_validation():
    inst = build_instance([("v1", 3.0), ("v2", 2.0)],
                          [("u1", ["v1", "v2"]), ("u2", ["v1"])])
    res = matching_result(inst, [("u1", "v2"), ("u2", "v1")])
    assert res.total_weight == 5.0
    assert res.matched_online == {"u1", "u2"}
    with pytest.raises(InstanceError, match="matched twice"):
        matching_result(inst, [("u1", "v1"), ("u2", "v1")])
    with pytest.raises(InstanceError, match="not an edge"):
        matching_result(inst, [("u2", "v2")])


def test_check_dual_shares_accepts_exact_split():
    inst = build_instance([("v1", 3.0)], [("u1", ["v1"])])
    res = matching_result(inst, [("u1", "v1")])
    good = DualShares(alpha={"v1": 1.2, "u1": 1.8})
    check_dual_shares(inst, res, good)
    bad = DualShares(alpha={"v1": 1.2, "u1": 1.9})
    with pytest.raises(AssertionError):
        check_dual_shares(inst, res, bad)


def test_check_dual_shares_rejects_nonzero_unmatched():
    inst = build_instance([("v1", 3.0), ("v2", 1.0)], [("u1", ["v1"])])
    res = matching_result(inst, [("u1", "v1")])
    bad = DualShares(alpha={"v1": 1.5, "u1": 1.5, "v2": 0.25})
    with pytest.raises(AssertionError, match="unmatched"):
        check_dual_shares(inst, res, bad)


def test_instances_hashable_and_frozen():
    a = tiny()
    b = tiny()
    assert a == b
    with pytest.raises(Exception):
        a.offline = ()
