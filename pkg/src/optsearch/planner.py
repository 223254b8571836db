"""Uniformly optimal effort allocation for a stationary target.

The attractiveness of placing more effort at ``x`` when ``y`` is already
there is ``q_x(y) = pi(x) * dd/dy(x, y)``.  For a threshold ``lam`` every
cell is filled until its attractiveness drops to ``lam``; the total effort
this needs, ``Q(lam)``, is decreasing in ``lam``.  The optimal plan for a
budget ``E`` uses the threshold ``lam*`` with ``Q(lam*) = E``.

Everything is evaluated at cell centres, and ``lam*`` is solved against the
same discrete ``Q`` so the budget identity holds at grid scale.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from . import priors as _priors
from .detection import Exponential
from .errors import InfeasibleBudgetError
from .grid import Domain, ScalarField, integrate

log = logging.getLogger(__name__)

__all__ = [
    "Scenario",
    "Plan",
    "PlateauRegion",
    "attractiveness",
    "attractiveness_inverse",
    "total_allocation_at",
    "threshold",
    "allocate",
    "incremental",
    "plateau_region",
]

MAX_BISECTIONS = 200
# smallest threshold tried while bracketing, about exp(-700)
MIN_LOG_LAMBDA = -700.0


@dataclass(frozen=True, eq=False)
class Scenario:
    """Prior, detection model, sensor parameters and discretisation.

    ``effort_fn`` overrides the cumulative effort ``E(T) = W * v * T``;
    it must be nondecreasing.
    """

    prior: object
    detection: object
    sweep_width: float
    speed: float
    domain: Domain
    effort_fn: Optional[Callable[[float], float]] = field(default=None, repr=False)

    def __post_init__(self):
        if not self.sweep_width > 0:
            raise ValueError("sweep width W must be positive")
        if not self.speed > 0:
            raise ValueError("speed v must be positive")

    def effort(self, T: float) -> float:
        if T < 0:
            raise ValueError("time must be nonnegative")
        if self.effort_fn is not None:
            return float(self.effort_fn(T))
        return self.sweep_width * self.speed * T

    @cached_property
    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return self.domain.mesh()

    @cached_property
    def prior_field(self) -> ScalarField:
        return _priors.discretize(self.prior, self.domain)

    @cached_property
    def truncation_mass(self) -> float:
        return _priors.truncation_mass(self.prior_field)

    @cached_property
    def log_prior(self) -> np.ndarray:
        p = self.prior_field.values
        with np.errstate(divide="ignore"):
            return np.where(p > 0, np.log(np.where(p > 0, p, 1.0)), -np.inf)

    @cached_property
    def log_q0(self) -> np.ndarray:
        """``log q_x(0)`` per cell; ``-inf`` where no effort is ever useful."""
        xs, ys = self.mesh
        g0 = self.detection.deriv(np.zeros(self.domain.shape), xs, ys)
        with np.errstate(divide="ignore"):
            lg = np.where(g0 > 0, np.log(np.where(g0 > 0, g0, 1.0)), -np.inf)
        return self.log_prior + lg

    @cached_property
    def blind_cells(self) -> np.ndarray:
        """Cells with positive prior where the sensor cannot detect."""
        return (self.prior_field.values > 0) & ~np.isfinite(self.log_q0)

    def allocation_at_log_threshold(self, log_lam: float) -> np.ndarray:
        """Per-cell ``q_x^{-1}(exp(log_lam))`` on the grid."""
        xs, ys = self.mesh
        live = np.isfinite(self.log_q0)
        log_target = np.where(live, log_lam - np.where(live, self.log_prior, 0.0), 0.0)
        alloc = self.detection.log_deriv_inverse(log_target, xs, ys)
        return np.where(live, alloc, 0.0)

    def covers_prior(self, mass_tol: float = 1e-5) -> bool:
        ref = _priors.default_domain(self.prior, mass_tol)
        d = self.domain
        return (
            d.x_min <= ref.x_min and d.x_max >= ref.x_max
            and d.y_min <= ref.y_min and d.y_max >= ref.y_max
        )


@dataclass(frozen=True, eq=False)
class PlateauRegion:
    """Cells whose initial attractiveness reaches the threshold."""

    mask: np.ndarray
    domain: Domain

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.mask))

    @property
    def area(self) -> float:
        return self.count * self.domain.cell_area

    @property
    def empty(self) -> bool:
        return self.count == 0


@dataclass(frozen=True, eq=False)
class Plan:
    scenario: Scenario
    T: float
    E: float
    lambda_star: float
    allocation: ScalarField
    plateau: PlateauRegion
    budget_residual: float = 0.0

    @property
    def log_lambda_star(self) -> float:
        return math.log(self.lambda_star) if self.lambda_star > 0 else -math.inf


def attractiveness(scenario: Scenario, point, effort_density: float) -> float:
    """``q_x(y) = pi(x) * dd/dy(x, y)`` at a single point."""
    x, y = point
    pi = float(scenario.prior.density(x, y))
    return pi * float(scenario.detection.deriv(effort_density, x, y))


def attractiveness_inverse(scenario: Scenario, point, lam: float) -> float:
    """Effort needed at ``point`` for its attractiveness to fall to ``lam``."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    x, y = point
    pi = float(scenario.prior.density(x, y))
    if pi <= 0:
        return 0.0
    return float(scenario.detection.log_deriv_inverse(math.log(lam) - math.log(pi), x, y))


def _total(scenario: Scenario, log_lam: float) -> float:
    return float(np.sum(scenario.allocation_at_log_threshold(log_lam)) * scenario.domain.cell_area)


def total_allocation_at(scenario: Scenario, lam: float) -> float:
    """Discrete ``Q(lam)``: total effort to bring every cell down to ``lam``."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    return _total(scenario, math.log(lam))


def _solve_log_threshold(scenario: Scenario, budget: float) -> tuple[float, float]:
    """Return ``(log lam*, Q(lam*) - budget)`` by bisection in log space."""
    live = scenario.log_q0[np.isfinite(scenario.log_q0)]
    if live.size == 0:
        raise InfeasibleBudgetError(budget, 0.0)
    hi = float(np.max(live))  # Q(hi) = 0 < budget
    step = 1.0
    lo = hi - step
    q_lo = _total(scenario, lo)
    while q_lo < budget:
        if lo <= MIN_LOG_LAMBDA:
            raise InfeasibleBudgetError(budget, q_lo)
        step *= 2.0
        hi, lo = lo, max(hi - step, MIN_LOG_LAMBDA)
        q_lo = _total(scenario, lo)
    q_hi = _total(scenario, hi)
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        q_mid = _total(scenario, mid)
        if q_mid >= budget:
            lo, q_lo = mid, q_mid
        else:
            hi, q_hi = mid, q_mid
        if q_lo - budget <= 1e-13 * budget:
            break
    if abs(q_hi - budget) < abs(q_lo - budget):
        return hi, q_hi - budget
    return lo, q_lo - budget


def threshold(scenario: Scenario, budget: float) -> float:
    """Threshold ``lam*`` with ``Q(lam*) = budget``.

    Raises
    ------
    ValueError
        If ``budget <= 0``.
    InfeasibleBudgetError
        If the domain cannot absorb ``budget`` at any positive threshold.
    """
    if not budget > 0:
        raise ValueError("budget must be positive")
    log_lam, _ = _solve_log_threshold(scenario, budget)
    return math.exp(log_lam)


def plateau_region(scenario: Scenario, lambda_star: float) -> PlateauRegion:
    """Mask of cells with ``lambda_star <= q_x(0)``."""
    if not lambda_star > 0:
        raise ValueError("lambda_star must be positive")
    return _plateau_log(scenario, math.log(lambda_star))


def _plateau_log(scenario: Scenario, log_lam: float) -> PlateauRegion:
    return PlateauRegion(scenario.log_q0 >= log_lam, scenario.domain)


def allocate(scenario: Scenario, T: float) -> Plan:
    """Uniformly optimal allocation for search time ``T``."""
    if T < 0:
        raise ValueError("T must be nonnegative")
    budget = scenario.effort(T)
    if budget <= 0:
        zero = ScalarField.zeros(scenario.domain)
        live = scenario.log_q0[np.isfinite(scenario.log_q0)]
        lam0 = math.exp(float(np.max(live))) if live.size else 0.0
        mask = np.zeros(scenario.domain.shape, dtype=bool)
        return Plan(scenario, T, 0.0, lam0, zero, PlateauRegion(mask, scenario.domain))
    log_lam, residual = _solve_log_threshold(scenario, budget)
    alloc = scenario.allocation_at_log_threshold(log_lam)
    if residual != 0.0 and abs(residual) > 1e-9 * budget:
        log.warning("budget residual %.3g exceeds 1e-9 relative", residual)
    return Plan(
        scenario=scenario,
        T=T,
        E=budget,
        lambda_star=math.exp(log_lam),
        allocation=ScalarField(scenario.domain, alloc),
        plateau=_plateau_log(scenario, log_lam),
        budget_residual=residual,
    )


def incremental(scenario: Scenario, T: float, t: float) -> ScalarField:
    """Extra effort density placed during ``[T, T + t]``."""
    if not t > 0:
        raise ValueError("t must be positive")
    return allocate(scenario, T + t).allocation - allocate(scenario, T).allocation


def budget_error(plan: Plan) -> float:
    """Relative mismatch between the allocated effort and ``E(T)``."""
    if plan.E == 0:
        return abs(integrate(plan.allocation))
    return abs(integrate(plan.allocation) - plan.E) / plan.E


def exponential_rate(scenario: Scenario) -> Optional[float]:
    """``alpha`` when detection is position-independent exponential."""
    if isinstance(scenario.detection, Exponential):
        return scenario.detection.alpha
    return None
