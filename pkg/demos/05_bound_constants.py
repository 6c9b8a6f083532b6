"""Reproduce the competitive-ratio constants numerically.

The pair-gain lower bound is a two-parameter surface over (tau, gamma);
its global minimum is the certified competitive ratio. The simple surface
with the simple-exp curve bottoms out at 5/4 - e^(-1/2) ~ 0.6434; the
improved surface with the half-exp curve at 1 - ln(2)/2 ~ 0.6534. Two
interior landmarks of the half-exp analysis come out as well: the root of
curve(t) = 2t near 0.3574 and the stationary arrival time ~0.564375 along
gamma = ln 2, where the surface sits at ~0.6557.
"""

import math

from rankmatch import (LN2, half_exp, improved_bound, minimize_bound,
                       simple_bound, simple_exp, solve_curve_equals_two_t,
                       stationary_tau)

print("closed-form targets:")
print(f"  5/4 - e^(-1/2) = {1.25 - math.exp(-0.5):.6f}")
print(f"  1 - ln(2)/2    = {1.0 - LN2 / 2.0:.6f}")
print()

point = minimize_bound(simple_exp(), "simple")
print(f"simple surface, simple-exp curve:   min {point.value:.6f} "
      f"at (tau={point.tau:.4f}, gamma={point.gamma:.4f})")

point = minimize_bound(half_exp(), "improved")
print(f"improved surface, half-exp curve:   min {point.value:.6f} "
      f"at (tau={point.tau:.4f}, gamma={point.gamma:.4f})")
print()

tau_star = solve_curve_equals_two_t(half_exp())
print(f"root of curve(t) = 2t (half-exp):   {tau_star:.6f}")

tau0, value0 = stationary_tau(half_exp(), LN2)
print(f"stationary tau along gamma = ln 2:  {tau0:.6f} "
      f"with value {value0:.6f}")
print()

print("spot checks of named evaluations:")
print(f"  simple(simple-exp, 1, 0)     = {simple_bound(simple_exp(), 1.0, 0.0):.6f}")
print(f"  simple(simple-exp, 1/2, 1/2) = {simple_bound(simple_exp(), 0.5, 0.5):.6f}")
print(f"  improved(half-exp, 0, 1)     = {improved_bound(half_exp(), 0.0, 1.0):.6f}")
print(f"  improved(half-exp, tau0, ln2)= {improved_bound(half_exp(), tau0, LN2):.6f}")
