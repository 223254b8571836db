"""
Optimal plan for a target that lies somewhere in the positive quadrant
======================================================================

The prior is ``exp(-(x1 + x2))`` on x1, x2 > 0 and detection is
``1 - exp(-y)``.  We build the plan for T = 10, compare it with the closed
form and look at the posterior after an unsuccessful search.
"""

# %%
# Set up the scenario: sweep width W = 1, speed v = 5, so E(T) = 5 T.
import numpy as np

from optsearch import (
    CornerExponential,
    Domain,
    Exponential,
    Scenario,
    allocate,
    detection_probability,
    posterior,
)
from optsearch.grid import masked_stats
from optsearch.oracles import CornerExponentialCase

sc = Scenario(CornerExponential(), Exponential(1.0), 1.0, 5.0, Domain(0, 15, 0, 15, 512, 512))
case = CornerExponentialCase(1.0, 5.0)

# %%
# The plan spends effort (B - x1 - x2) on the triangle x1 + x2 < B where
# B = (6 W v T)^(1/3).
T = 10.0
plan = allocate(sc, T)
xs, ys = sc.mesh
err = np.abs(plan.allocation.values - case.allocation(xs, ys, T)).max()
print(f"B = {case.B(T):.6f}   lambda* = {plan.lambda_star:.6g} (exact {case.lambda_star(T):.6g})")
print(f"sup |numeric - exact| = {err:.2e}")
print(f"effort spent = {plan.E - plan.budget_residual:.6f} of E = {plan.E}")

# %%
# Detection probability and the flat posterior on the searched triangle.
P = detection_probability(sc, plan.allocation)
post = posterior(sc, plan)
stats = masked_stats(post.field.values, plan.plateau.mask)
print(f"P = {P:.6f} (exact {case.detection_probability(T):.6f})")
print(f"posterior on searched area: {stats['mean']:.6f} +- {stats['rel_std']:.1e} (relative)")
print(f"closed-form plateau: {case.plateau_value(T):.6f}")

# %%
# A cut along the diagonal x1 = x2 shows the plateau and the exponential
# tail beyond it.
for i in range(0, 512, 48):
    s = xs[i, i] + ys[i, i]
    print(f"s = {s:6.3f}   effort {plan.allocation.values[i, i]:7.4f}   posterior {post.field.values[i, i]:.3e}")
