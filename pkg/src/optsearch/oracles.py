"""Independent reference solutions.

Two closed-form cases with unit-rate exponential detection:

* circular normal prior, where the plan, detection probability, posterior
  and incremental effort depend only on the radius;
* the quadrant exponential prior ``exp(-(x1 + x2))``, where everything is a
  function of ``B(T) = (6 W v T)^(1/3)``.

Plus a brute-force greedy allocator that hands out effort in small quanta
to whichever cell currently has the highest marginal payoff.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _quad

from . import priors as _priors
from .detection import Exponential
from .grid import Domain, ScalarField

__all__ = [
    "CircularNormalCase",
    "CornerExponentialCase",
    "ex1_closed_forms",
    "ex1_detection_probability_quadrature",
    "greedy_allocate",
    "closed_form_case",
    "oracle_report",
]

MAX_GREEDY_STEPS = 10**7
MAX_GREEDY_CELLS = 64 * 64


@dataclass(frozen=True)
class CircularNormalCase:
    sigma: float = 1.0
    W: float = 1.0
    v: float = 5.0
    center: tuple[float, float] = (0.0, 0.0)

    @property
    def H(self) -> float:
        return math.sqrt(self.W * self.v / (math.pi * self.sigma**2))

    def radius(self, T: float) -> float:
        return math.sqrt(2 * self.sigma**2 * self.H * math.sqrt(T))

    def allocation(self, r, T: float):
        r = np.asarray(r, dtype=float)
        return np.maximum(self.H * math.sqrt(T) - r**2 / (2 * self.sigma**2), 0.0)

    def detection_probability(self, T: float) -> float:
        h = self.H * math.sqrt(T)
        return 1.0 - (1.0 + h) * math.exp(-h)

    def posterior(self, r, T: float):
        r = np.asarray(r, dtype=float)
        h = self.H * math.sqrt(T)
        s2 = self.sigma**2
        base = 1.0 / (2 * math.pi * s2 * (1 + h))
        outside = np.exp(-(r**2) / (2 * s2) + h) * base
        return np.where(r <= self.radius(T), base, outside)

    def incremental(self, r, T: float, t: float):
        r = np.asarray(r, dtype=float)
        H = self.H
        inner = H * (math.sqrt(T + t) - math.sqrt(T))
        ring = H * math.sqrt(T + t) - r**2 / (2 * self.sigma**2)
        return np.where(
            r <= self.radius(T), inner, np.where(r <= self.radius(T + t), ring, 0.0)
        )

    def lambda_star(self, T: float) -> float:
        return math.exp(-self.H * math.sqrt(T)) / (2 * math.pi * self.sigma**2)

    def plateau_value(self, T: float) -> float:
        return 1.0 / (2 * math.pi * self.sigma**2 * (1 + self.H * math.sqrt(T)))

    def box_mass(self, domain: Domain) -> float:
        s = self.sigma * math.sqrt(2)
        cx, cy = self.center
        fx = 0.5 * (math.erf((domain.x_max - cx) / s) - math.erf((domain.x_min - cx) / s))
        fy = 0.5 * (math.erf((domain.y_max - cy) / s) - math.erf((domain.y_min - cy) / s))
        return fx * fy

    def unsearched_mass(self, T: float) -> float:
        return math.exp(-self.H * math.sqrt(T))

    def comparable(self, T: float, domain: Domain, rtol: float = 1e-3) -> bool:
        """True when truncating to ``domain`` perturbs the unsearched mass by
        at most ``rtol`` relative, so grid results can match the closed form."""
        return (1.0 - self.box_mass(domain)) <= rtol * self.unsearched_mass(T)

    def radius_of(self, x, y):
        return np.hypot(np.asarray(x, float) - self.center[0], np.asarray(y, float) - self.center[1])


@dataclass(frozen=True)
class CornerExponentialCase:
    W: float = 1.0
    v: float = 5.0
    origin: tuple[float, float] = (0.0, 0.0)

    def B(self, T: float) -> float:
        return (6 * self.W * self.v * T) ** (1.0 / 3.0)

    def _s(self, x, y):
        u = np.asarray(x, float) - self.origin[0]
        w = np.asarray(y, float) - self.origin[1]
        return u + w, (u > 0) & (w > 0)

    @staticmethod
    def total_allocation(lam: float) -> float:
        return -math.log(lam) ** 3 / 6.0 if lam < 1.0 else 0.0

    def lambda_star(self, T: float) -> float:
        return math.exp(-self.B(T))

    def allocation(self, x, y, T: float):
        s, inside = self._s(x, y)
        return np.where(inside, np.maximum(self.B(T) - s, 0.0), 0.0)

    def detection_probability(self, T: float) -> float:
        # the printed last term has exponent (6WvT)^(2/3); quadrature confirms ^(1/3)
        B = self.B(T)
        return 1.0 - (1.0 + B + B * B / 2) * math.exp(-B)

    def normalizer(self, T: float) -> float:
        B = self.B(T)
        return (1.0 + B + B * B / 2) * math.exp(-B)

    def plateau_value(self, T: float) -> float:
        B = self.B(T)
        return 1.0 / (1.0 + B + B * B / 2)

    def plateau_area(self, T: float) -> float:
        return self.B(T) ** 2 / 2

    def box_mass(self, domain: Domain) -> float:
        ox, oy = self.origin

        def frac(lo, hi):
            lo, hi = max(lo, 0.0), max(hi, 0.0)
            return math.exp(-lo) - math.exp(-hi)

        return frac(domain.x_min - ox, domain.x_max - ox) * frac(domain.y_min - oy, domain.y_max - oy)

    def unsearched_mass(self, T: float) -> float:
        B = self.B(T)
        return (1.0 + B) * math.exp(-B)

    def comparable(self, T: float, domain: Domain, rtol: float = 1e-3) -> bool:
        """True when truncating to ``domain`` perturbs the unsearched mass by
        at most ``rtol`` relative, so grid results can match the closed form."""
        return (1.0 - self.box_mass(domain)) <= rtol * self.unsearched_mass(T)

    def posterior(self, x, y, T: float):
        s, inside = self._s(x, y)
        B = self.B(T)
        off = np.exp(-(s - B)) * self.plateau_value(T)
        return np.where(inside, np.where(s <= B, self.plateau_value(T), off), 0.0)

    def incremental(self, x, y, T: float, t: float):
        s, inside = self._s(x, y)
        b0, b1 = self.B(T), self.B(T + t)
        val = np.where(s <= b0, b1 - b0, np.where(s <= b1, b1 - s, 0.0))
        return np.where(inside, val, 0.0)


def ex1_closed_forms(case: CornerExponentialCase, T: float) -> dict:
    """All quadrant-exponential reference quantities at time ``T``."""
    if not T > 0:
        raise ValueError("T must be positive")
    return {
        "B": case.B(T),
        "lambda_star": case.lambda_star(T),
        "allocation": lambda x, y: case.allocation(x, y, T),
        "P": case.detection_probability(T),
        "normalizer": case.normalizer(T),
        "plateau_value": case.plateau_value(T),
        "plateau_area": case.plateau_area(T),
        "incremental": lambda x, y, t: case.incremental(x, y, T, t),
    }


def ex1_detection_probability_quadrature(case: CornerExponentialCase, T: float) -> float:
    """Detection probability by adaptive quadrature of
    ``(1 - exp(-(B - s))) exp(-s)`` over the triangle ``s = x1 + x2 <= B``."""
    B = case.B(T)
    f = lambda x2, x1: -math.expm1(-(B - x1 - x2)) * math.exp(-(x1 + x2))
    val, _ = _quad.dblquad(f, 0.0, B, 0.0, lambda x1: B - x1, epsabs=1e-14, epsrel=1e-13)
    return val


def greedy_allocate(scenario, budget: float, quantum: float, domain: Domain | None = None) -> ScalarField:
    """Allocate ``budget`` one ``quantum`` of effort at a time.

    Each step adds ``quantum / cell_area`` of effort density to the cell
    with the highest marginal attractiveness ``pi(x) * dd/dy``; ties go to
    the lowest row-major index.  Sequential by construction.
    """
    domain = domain or scenario.domain
    if not quantum > 0:
        raise ValueError("quantum must be positive")
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    if domain.nx * domain.ny > MAX_GREEDY_CELLS:
        raise ValueError("greedy oracle is limited to 64x64 cells")
    n_full = int(math.floor(budget / quantum * (1 + 1e-12)))
    remainder = budget - n_full * quantum
    if remainder < 1e-12 * max(budget, quantum):
        remainder = 0.0
    if n_full + (remainder > 0) > MAX_GREEDY_STEPS:
        raise ValueError(f"greedy oracle needs more than {MAX_GREEDY_STEPS} steps")

    xs, ys = domain.mesh()
    xs = xs.ravel()
    ys = ys.ravel()
    pi = _priors.discretize(scenario.prior, domain).values.ravel()
    det = scenario.detection
    alloc = np.zeros(pi.size)
    dy = quantum / domain.cell_area

    if isinstance(det, Exponential):
        a = det.alpha
        gain = lambda i, y: pi[i] * a * math.exp(-a * y)
    else:
        gain = lambda i, y: pi[i] * float(det.deriv(y, xs[i], ys[i]))

    heap = [(-gain(i, 0.0), i) for i in range(pi.size)]
    heapq.heapify(heap)
    for _ in range(n_full):
        _, i = heap[0]
        alloc[i] += dy
        heapq.heapreplace(heap, (-gain(i, alloc[i]), i))
    if remainder > 0:
        alloc[heap[0][1]] += remainder / domain.cell_area
    return ScalarField(domain, alloc.reshape(domain.shape))


def closed_form_case(scenario):
    """Matching closed-form case for ``scenario``, or ``None``."""
    det = scenario.detection
    if scenario.effort_fn is not None or not isinstance(det, Exponential) or det.alpha != 1.0:
        return None
    p = scenario.prior
    if isinstance(p, _priors.CircularNormal):
        return CircularNormalCase(p.sigma, scenario.sweep_width, scenario.speed, p.center)
    if isinstance(p, _priors.CornerExponential):
        return CornerExponentialCase(scenario.sweep_width, scenario.speed, p.origin)
    return None


def oracle_report(plan, post=None, P=None) -> dict | None:
    """Compare a numeric plan with its closed form where one exists."""
    from .bayes import posterior
    from .metrics import detection_probability

    sc = plan.scenario
    case = closed_form_case(sc)
    if case is None or plan.T <= 0:
        return None
    xs, ys = sc.mesh
    T = plan.T
    if isinstance(case, CircularNormalCase):
        exact = case.allocation(case.radius_of(xs, ys), T)
        name = "circular_normal"
    else:
        exact = case.allocation(xs, ys, T)
        name = "corner_exponential"
    post = post or posterior(sc, plan)
    P = detection_probability(sc, plan.allocation) if P is None else P
    return {
        "case": name,
        "T": T,
        "sup_err_allocation": float(np.max(np.abs(plan.allocation.values - exact))),
        "err_P": abs(P - case.detection_probability(T)),
        "err_plateau": abs(post.plateau_value - case.plateau_value(T)),
        "plateau_value": case.plateau_value(T),
    }
