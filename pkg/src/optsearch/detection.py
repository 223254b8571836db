"""Detection functions ``d(x, y)``: probability of detecting a target at
``x`` given effort density ``y`` there.

All models are regular: ``d(x, 0) = 0`` and ``dd/dy`` is continuous,
positive and strictly decreasing in ``y``.  Methods take the effort first
and the coordinates ``x1, x2`` after, all broadcastable numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ModelRegularityError
from .grid import ScalarField

__all__ = [
    "Exponential",
    "SpatialExponential",
    "GenericRegular",
    "prob",
    "deriv",
    "deriv_inverse",
]


def _check_effort(effort):
    effort = np.asarray(effort, dtype=float)
    if np.any(effort < 0):
        raise ValueError("effort density must be nonnegative")
    return effort


@dataclass(frozen=True)
class Exponential:
    """``d(x, y) = 1 - exp(-alpha * y)``, independent of position."""

    alpha: float = 1.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")

    def rate(self, x1, x2):
        return np.full(np.broadcast(np.asarray(x1), np.asarray(x2)).shape, float(self.alpha))

    def prob(self, effort, x1=0.0, x2=0.0):
        effort = _check_effort(effort)
        return -np.expm1(-self.alpha * effort)

    def survival(self, effort, x1=0.0, x2=0.0):
        """``1 - d``, evaluated without cancellation."""
        effort = _check_effort(effort)
        return np.exp(-self.alpha * effort)

    def deriv(self, effort, x1=0.0, x2=0.0):
        effort = _check_effort(effort)
        return self.alpha * np.exp(-self.alpha * effort)

    def log_deriv_inverse(self, log_target, x1=0.0, x2=0.0):
        """Effort at which ``log dd/dy`` equals ``log_target`` (0 if never)."""
        log_target = np.asarray(log_target, dtype=float)
        y = (np.log(self.alpha) - log_target) / self.alpha
        return np.maximum(y, 0.0)


@dataclass(frozen=True, eq=False)
class SpatialExponential:
    """``d(x, y) = 1 - exp(-beta(x) * y)`` with a position-dependent rate.

    ``beta`` is either ``"norm_sq"`` (``beta(x) = |x|^2``) or a
    :class:`ScalarField` interpolated bilinearly.  Where ``beta`` vanishes
    the sensor is blind and no effort is ever useful.
    """

    beta: object = "norm_sq"

    def __post_init__(self):
        if isinstance(self.beta, ScalarField):
            if np.any(self.beta.values < 0):
                raise ValueError("beta field must be nonnegative")
        elif self.beta != "norm_sq":
            raise ValueError("beta must be 'norm_sq' or a ScalarField")

    def rate(self, x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        if isinstance(self.beta, ScalarField):
            return self.beta.interpolate(x1, x2)
        return x1 * x1 + x2 * x2

    def prob(self, effort, x1, x2):
        effort = _check_effort(effort)
        return -np.expm1(-self.rate(x1, x2) * effort)

    def survival(self, effort, x1, x2):
        effort = _check_effort(effort)
        return np.exp(-self.rate(x1, x2) * effort)

    def deriv(self, effort, x1, x2):
        effort = _check_effort(effort)
        b = self.rate(x1, x2)
        return b * np.exp(-b * effort)

    def log_deriv_inverse(self, log_target, x1, x2):
        b = self.rate(x1, x2)
        log_target = np.asarray(log_target, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            y = (np.log(b) - log_target) / b
        return np.where(b > 0, np.maximum(y, 0.0), 0.0)


@dataclass(frozen=True, eq=False)
class GenericRegular:
    """User-supplied regular detection function.

    ``d`` and ``dd`` are vectorised callables ``f(effort, x1, x2)``
    returning ``d`` and ``dd/dy``.  The derivative is inverted by bracketed
    bisection.
    """

    d: Callable
    dd: Callable
    rtol: float = 1e-12
    max_iter: int = 200
    _sample: tuple = field(default=(0.0, 50.0), repr=False)

    def prob(self, effort, x1, x2):
        return np.asarray(self.d(_check_effort(effort), x1, x2), dtype=float)

    def survival(self, effort, x1, x2):
        return 1.0 - self.prob(effort, x1, x2)

    def deriv(self, effort, x1, x2):
        return np.asarray(self.dd(_check_effort(effort), x1, x2), dtype=float)

    def check_regularity(self, x1, x2, n: int = 64) -> None:
        """Sample ``n`` efforts per point and verify the regularity hypothesis."""
        x1 = np.atleast_1d(np.asarray(x1, dtype=float))[..., None]
        x2 = np.atleast_1d(np.asarray(x2, dtype=float))[..., None]
        ys = np.linspace(*self._sample, n)
        p = self.prob(ys, x1, x2)
        g = self.deriv(ys, x1, x2)
        if np.any(np.abs(p[..., 0]) > 1e-12):
            raise ModelRegularityError("d(x, 0) must vanish")
        if np.any((p < 0) | (p > 1)):
            raise ModelRegularityError("d must lie in [0, 1]")
        if np.any(g <= 0) or np.any(np.diff(g, axis=-1) >= 0):
            raise ModelRegularityError("dd/dy must be positive and strictly decreasing")

    def log_deriv_inverse(self, log_target, x1, x2):
        target = np.exp(np.asarray(log_target, dtype=float))
        x1, x2, target = np.broadcast_arrays(
            np.asarray(x1, float), np.asarray(x2, float), target
        )
        g0 = self.deriv(np.zeros_like(target), x1, x2)
        active = target < g0
        out = np.zeros(target.shape)
        if not active.any():
            return out
        t = target[active]
        a1 = x1[active]
        a2 = x2[active]
        lo = np.zeros_like(t)
        g_lo = g0[active]
        hi = np.ones_like(t)
        g_hi = self.deriv(hi, a1, a2)
        for _ in range(self.max_iter):
            grow = g_hi >= t
            if not grow.any():
                break
            if np.any(g_hi[grow] > g_lo[grow]):
                raise ModelRegularityError("dd/dy increased while bracketing")
            lo = np.where(grow, hi, lo)
            g_lo = np.where(grow, g_hi, g_lo)
            hi = np.where(grow, 2 * hi, hi)
            g_hi = self.deriv(hi, a1, a2)
        else:
            raise ModelRegularityError("could not bracket the derivative inverse")
        for _ in range(self.max_iter):
            mid = 0.5 * (lo + hi)
            g_mid = self.deriv(mid, a1, a2)
            if np.any((g_mid > g_lo) | (g_mid < g_hi)):
                raise ModelRegularityError("dd/dy is not monotone in effort")
            above = g_mid >= t
            lo = np.where(above, mid, lo)
            g_lo = np.where(above, g_mid, g_lo)
            hi = np.where(above, hi, mid)
            g_hi = np.where(above, g_hi, g_mid)
            if np.all(hi - lo <= self.rtol * hi):
                break
        out[active] = 0.5 * (lo + hi)
        return out


def prob(model, point, effort: float) -> float:
    """Detection probability ``d(x, y)`` at a single point."""
    return float(model.prob(effort, *point))


def deriv(model, point, effort: float) -> float:
    """``dd/dy`` at a single point."""
    return float(model.deriv(effort, *point))


def deriv_inverse(model, point, target: float) -> float:
    """Effort at which ``dd/dy`` falls to ``target``; 0 if it starts below."""
    if not target > 0:
        raise ValueError("target must be positive")
    return float(model.log_deriv_inverse(np.log(target), *point))
