"""Detection probability, cost and uniformity of allocations."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .grid import ScalarField, integrate, masked_stats
from .planner import Plan, PlateauRegion, Scenario, incremental

__all__ = [
    "PlanReport",
    "detection_probability",
    "cost",
    "uniformity",
    "plan_report",
]


def detection_probability(scenario: Scenario, allocation: ScalarField) -> float:
    """``P[f]``: integral of ``d(x, f(x)) * pi(x)`` over the domain."""
    f = allocation.values
    if np.any(f < 0):
        raise ValueError("allocation must be nonnegative")
    xs, ys = scenario.mesh
    p = scenario.detection.prob(f, xs, ys) * scenario.prior_field.values
    return integrate(ScalarField(scenario.domain, p))


def cost(allocation: ScalarField) -> float:
    """Total effort of an allocation (unit cost per unit effort)."""
    if not allocation.is_nonnegative():
        raise ValueError("allocation must be nonnegative")
    return integrate(allocation)


def uniformity(field: ScalarField, region: PlateauRegion) -> dict:
    """Mean, max absolute deviation and relative std of ``field`` over ``region``."""
    if region.empty:
        raise ValueError("uniformity requested over an empty region")
    return masked_stats(field.values, region.mask)


@dataclass
class PlanReport:
    T: float
    E: float
    lambda_star: float
    detection_probability: float
    cost: float
    plateau_area: float
    truncation_mass: float
    incremental_t: Optional[float] = None
    incremental_uniformity: Optional[dict] = None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def plan_report(plan: Plan, t: Optional[float] = None) -> PlanReport:
    """Summarise ``plan``; with ``t`` also report how uniform the next
    ``t`` time units of effort are over the plateau."""
    sc = plan.scenario
    rep = PlanReport(
        T=plan.T,
        E=plan.E,
        lambda_star=plan.lambda_star,
        detection_probability=detection_probability(sc, plan.allocation),
        cost=cost(plan.allocation),
        plateau_area=plan.plateau.area,
        truncation_mass=sc.truncation_mass,
    )
    if t is not None and not plan.plateau.empty:
        rep.incremental_t = t
        rep.incremental_uniformity = uniformity(incremental(sc, plan.T, t), plan.plateau)
    return rep
