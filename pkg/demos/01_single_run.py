"""Walk through one ranking run on a tiny weighted instance.

Two offline vertices with very different weights compete for a single
arrival: the cheap nearby vertex offers less than the heavy distant one,
so the arrival takes the heavy one. The matched weight then splits into
the two dual shares, which always recompose the full edge weight.
"""

from rankmatch import (assign_duals, build_instance, check_dual_shares,
                       half_exp, run_ranking, validate_rank_assignment)

instance = build_instance(
    offline=[("v1", 1.0), ("v2", 10.0)],
    online=[("u1", ["v1", "v2"])],
)
ranks = validate_rank_assignment(
    instance, {"ranks": {"v1": 0.1, "v2": 0.9, "u1": 0.5}})
spec = half_exp()

result, trace = run_ranking(instance, spec, ranks)

print("arrival log (one JSON object per arrival):")
print(trace.to_json_lines())
print()
print(f"matched pairs: {result.pairs}")
print(f"total weight : {result.total_weight}")

shares = assign_duals(instance, result, spec, ranks)
print()
print("dual shares (gain split of each matched edge):")
for vid, alpha in sorted(shares.alpha.items()):
    print(f"  {vid}: {alpha:.6f}")

check_dual_shares(instance, result, shares)
print()
print("accounting identity holds: share total == matched weight"
      f" ({shares.total():.12f} == {result.total_weight:.12f})")
