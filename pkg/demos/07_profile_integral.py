"""Ratio lower bounds from explicit threshold profiles.

Beyond the closed-form surfaces, the competitive ratio admits an integral
lower bound driven by whole beta/theta profiles. Step profiles at the
adversarial (tau, gamma) recover at least the improved-bound value, the
all-matched profile integrates to one, and the static-price encoding with
a constant marginal rank reproduces 1 - 1/e exactly for every threshold,
which is why that baseline cannot beat it.
"""

import math

from rankmatch import (Piecewise, StepProfiles, adversarial_baseline,
                       half_exp, integral_bound, minimize_bound)

h = half_exp()

prof = StepProfiles(theta_fn=Piecewise((0.0, 1.0), (1.0,)),
                    beta_fn=Piecewise((0.0, 1.0), (0.0,)))
print(f"always matched-to band: integral = {integral_bound(h, prof):.6f}")
print()

point = minimize_bound(h, "improved")
t = min(max(point.tau, 1e-6), 1 - 1e-6)
g = point.gamma
step = StepProfiles(
    theta_fn=Piecewise((0.0, t, 1.0), (g, 1.0)),
    beta_fn=Piecewise((0.0, t, 1.0), (0.0, g)))
val = integral_bound(h, step)
print(f"step profiles at the adversarial point (tau={t:.4f}, gamma={g:.4f}):")
print(f"  integral = {val:.6f} >= improved bound {point.value:.6f}")
print()

adv = adversarial_baseline()
print("static prices, matched below a constant marginal rank c:")
for c in (0.25, 0.5, 0.75):
    prof_c = StepProfiles(theta_fn=Piecewise((0.0, 1.0), (c,)),
                          beta_fn=Piecewise((0.0, 1.0), (c,)))
    print(f"  c = {c:.2f}: integral = {integral_bound(adv, prof_c):.6f}"
          f"   (1 - 1/e = {1 - 1/math.e:.6f})")
