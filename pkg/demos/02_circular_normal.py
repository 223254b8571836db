"""
Circular normal prior
=====================

With a circular normal prior and unit-rate exponential detection the plan
depends only on the distance from the centre.  The searched disc grows as
T^(1/4).
"""

# %%
import math

import numpy as np

from optsearch import CircularNormal, Domain, Exponential, Scenario, allocate, detection_probability
from optsearch.oracles import CircularNormalCase

sc = Scenario(CircularNormal(1.0), Exponential(1.0), 1.0, 5.0, Domain(-6, 6, -6, 6, 512, 512))
case = CircularNormalCase(1.0, 1.0, 5.0)
print(f"H = sqrt(W v / (pi sigma^2)) = {case.H:.6f}")

# %%
# Radius of the searched disc from its area, against R(T)^2 = 2 sigma^2 H sqrt(T).
print("    T    R(numeric)  R(exact)   P(numeric)  P(exact)")
for T in (1.0, 4.0, 16.0, 64.0):
    plan = allocate(sc, T)
    R = math.sqrt(plan.plateau.area / math.pi)
    P = detection_probability(sc, plan.allocation)
    print(f"{T:5g}   {R:9.5f}  {case.radius(T):9.5f}   {P:9.6f}  {case.detection_probability(T):9.6f}")

# %%
# Radial profile at T = 4 along the positive x axis.
plan = allocate(sc, 4.0)
xs, _ = sc.mesh
row = sc.domain.ny // 2
for j in range(sc.domain.nx // 2, sc.domain.nx, 32):
    r = abs(xs[row, j])
    print(f"r = {r:5.3f}   effort {plan.allocation.values[row, j]:.5f}   exact {float(case.allocation(r, 4.0)):.5f}")
