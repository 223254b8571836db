"""
When detection depends on position
==================================

Replace ``1 - exp(-y)`` by ``1 - exp(-|x|^2 y)``.  The plan is still
optimal and still uses the whole budget, but the posterior is no longer flat
on the searched area and extra effort is no longer spread evenly.
"""

# %%
import numpy as np

from optsearch import CornerExponential, Domain, Exponential, Scenario, SpatialExponential, allocate, posterior
from optsearch.grid import masked_stats

dom = Domain(0, 15, 0, 15, 512, 512)
models = {
    "exp(-y)": Exponential(1.0),
    "exp(-|x|^2 y)": SpatialExponential("norm_sq"),
}

# %%
# Spread of the posterior and of the increment T=10 -> T=20 over the area
# searched by T=10.
for name, det in models.items():
    sc = Scenario(CornerExponential(), det, 1.0, 5.0, dom)
    a, b = allocate(sc, 10.0), allocate(sc, 20.0)
    post = posterior(sc, a)
    p_std = masked_stats(post.field.values, a.plateau.mask)["rel_std"]
    inc = b.allocation.values - a.allocation.values
    i_std = masked_stats(inc, a.plateau.mask)["rel_std"]
    print(f"{name:>14}: posterior rel_std {p_std:9.3g}   increment rel_std {i_std:9.3g}   "
          f"min increment {inc.min():.2g}")
