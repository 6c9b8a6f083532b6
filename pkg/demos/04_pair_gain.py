"""Expected combined gain of single edges versus the worst-case constant.

For an edge (u, v), average (alpha_u + alpha_v) / w_v over a grid of the
two ranks with all other ranks frozen. The guarantee behind the 0.6534
competitive ratio is per-edge and per-fixed-ranks, so every estimate must
clear that constant (up to quadrature error); most clear it with room.
The estimate decomposes exactly into the corner region (where the pair
match each other), the offline side's region, and the online side's.
"""

import numpy as np

from rankmatch import half_exp, minimize_bound, pair_gain, random_instance, sample_ranks

floor = minimize_bound(half_exp(), "improved").value
print(f"worst-case constant (half-exp, improved bound): {floor:.6f}")
print()

rng = np.random.default_rng(4)
for trial in range(3):
    instance = random_instance(rng, max_side=5, weighted=True)
    base = sample_ranks(instance, (4, trial))
    edges = [(u, v) for u in instance.online_ids for v in instance.neighbors[u]]
    print(f"instance {trial}: {len(instance.online)}+{len(instance.offline)} "
          f"vertices, {len(edges)} edges")
    for u, v in edges[:4]:
        est = pair_gain(instance, half_exp(), base, u, v, grid_n=150)
        print(f"  ({u},{v}): estimate={est.estimate:.5f}  "
              f"corner={est.corner:.4f} v_side={est.v_side:.4f} "
              f"u_side={est.u_side:.4f}  tau={est.tau:.3f} gamma={est.gamma:.3f}"
              f"  margin={est.estimate - floor:+.5f}")
    print()

print("note: estimates can exceed 1 when the online endpoint has heavier")
print("neighbors than v; the guarantee is only a lower bound.")
