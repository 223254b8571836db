"""
Checking the plan against a greedy allocator
============================================

Handing out effort in small quanta, always to the cell with the best
marginal payoff, converges to the optimal plan as the quantum shrinks.
"""

# %%
import time

import numpy as np

from optsearch import CornerExponential, Domain, Exponential, Scenario, allocate
from optsearch.oracles import greedy_allocate

sc = Scenario(CornerExponential(), Exponential(1.0), 1.0, 5.0, Domain(0, 12, 0, 12, 32, 32))
plan = allocate(sc, 10.0)

# %%
for steps in (1e3, 1e4, 1e5):
    q = plan.E / steps
    t0 = time.perf_counter()
    g = greedy_allocate(sc, plan.E, q)
    dev = np.abs(g.values - plan.allocation.values).max()
    print(f"{int(steps):>7} quanta: max dev {dev:.2e}  (bound {3 * q / sc.domain.cell_area:.2e})"
          f"  {time.perf_counter() - t0:.2f} s")
