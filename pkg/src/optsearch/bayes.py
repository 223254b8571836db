"""Posterior target density after an unsuccessful search.

Given no detection under allocation ``phi``, the posterior is
``(1 - d(x, phi(x))) pi(x)`` divided by the non-detection probability.
For exponential detection the numerator equals ``lam* / alpha`` on the
searched region, so the posterior is flat there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .grid import ScalarField, integrate, masked_stats, sup_norm
from .planner import Plan, PlateauRegion, Scenario, allocate, exponential_rate

__all__ = [
    "PosteriorField",
    "posterior",
    "plateau_constancy",
    "flattening_profile",
    "FlatteningRow",
]


@dataclass(frozen=True, eq=False)
class PosteriorField:
    field: ScalarField
    normalizer: float
    plateau_value: Optional[float] = None


def posterior(scenario: Scenario, plan: Plan) -> PosteriorField:
    """Posterior density on the grid given no detection under ``plan``."""
    if plan.scenario is not scenario and plan.allocation.domain != scenario.domain:
        raise ValueError("plan does not belong to this scenario")
    xs, ys = scenario.mesh
    miss = scenario.detection.survival(plan.allocation.values, xs, ys)
    numer = ScalarField(scenario.domain, miss * scenario.prior_field.values)
    normalizer = integrate(numer)
    if not normalizer > 0:
        raise FloatingPointError(f"non-detection probability {normalizer!r} is not positive")
    alpha = exponential_rate(scenario)
    plateau_value = None
    if alpha is not None and plan.E > 0:
        plateau_value = plan.lambda_star / (alpha * normalizer)
    return PosteriorField(ScalarField(scenario.domain, numer.values / normalizer), normalizer, plateau_value)


def plateau_constancy(post: PosteriorField, region: PlateauRegion) -> dict:
    """Statistics of the posterior over ``region``.

    Under exponential detection ``rel_std`` is at rounding level.
    """
    if region.empty:
        raise ValueError("plateau region is empty")
    return masked_stats(post.field.values, region.mask)


@dataclass
class FlatteningRow:
    T: float
    sup_posterior: float
    sup_on_plateau: float
    plateau_value: Optional[float]
    plateau_area: float
    bound: float
    posterior_mass: float


def flattening_profile(scenario: Scenario, times: Sequence[float]) -> list[FlatteningRow]:
    """Posterior peak, plateau area and the ``1 / area`` bound along ``times``."""
    times = [float(t) for t in times]
    if not times or any(t <= 0 for t in times):
        raise ValueError("times must be positive")
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ValueError("times must be strictly increasing")
    rows = []
    for T in times:
        plan = allocate(scenario, T)
        post = posterior(scenario, plan)
        area = plan.plateau.area
        on = float(np.max(post.field.values[plan.plateau.mask])) if area > 0 else 0.0
        rows.append(
            FlatteningRow(
                T=T,
                sup_posterior=sup_norm(post.field),
                sup_on_plateau=on,
                plateau_value=post.plateau_value,
                plateau_area=area,
                bound=1.0 / area if area > 0 else float("inf"),
                posterior_mass=integrate(post.field),
            )
        )
    return rows


def flattening_checks(rows: Sequence[FlatteningRow], grid_tol: float = 1e-9) -> dict:
    """Boolean flags for the flattening/spreading trend in ``rows``."""
    areas = [r.plateau_area for r in rows]
    values = [r.plateau_value if r.plateau_value is not None else r.sup_on_plateau for r in rows]
    return {
        "plateau_area_increasing": all(b > a for a, b in zip(areas, areas[1:])),
        "plateau_value_decreasing": all(b < a for a, b in zip(values, values[1:])),
        "bound_holds": all(r.sup_on_plateau <= r.bound * (1 + grid_tol) for r in rows),
        "mass_normalized": all(abs(r.posterior_mass - 1.0) <= 1e-6 for r in rows),
    }
