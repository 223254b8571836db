"""Target location priors.

Four families are supported: a circular normal, the quadrant exponential
``exp(-(x1 + x2))`` anchored at an origin, a uniform box, and a gridded
density (typically a probability map loaded from CSV).  Densities are
evaluated vectorised on coordinate arrays ``x, y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError
from .grid import Domain, ScalarField, integrate, read_field_csv

__all__ = [
    "CircularNormal",
    "CornerExponential",
    "UniformBox",
    "Gridded",
    "density",
    "discretize",
    "default_domain",
    "truncation_mass",
    "is_non_uniform",
]

GRIDDED_MASS_BAND = (0.999, 1.001)


@dataclass(frozen=True)
class CircularNormal:
    sigma: float = 1.0
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    def density(self, x, y):
        r2 = (np.asarray(x, float) - self.center[0]) ** 2 + (np.asarray(y, float) - self.center[1]) ** 2
        s2 = self.sigma**2
        return np.exp(-r2 / (2 * s2)) / (2 * np.pi * s2)

    def default_domain(self, mass_tol: float, nx: int = 512, ny: int = 512) -> Domain:
        # radial tail P(r > k sigma) = exp(-k^2 / 2); the square contains the disc
        k = math.sqrt(2.0 * math.log(1.0 / mass_tol))
        half = k * self.sigma
        cx, cy = self.center
        return Domain(cx - half, cx + half, cy - half, cy + half, nx, ny)


@dataclass(frozen=True)
class CornerExponential:
    """Density ``exp(-(x1 + x2))`` on the open quadrant above ``origin``."""

    origin: tuple[float, float] = (0.0, 0.0)

    def density(self, x, y):
        u = np.asarray(x, float) - self.origin[0]
        v = np.asarray(y, float) - self.origin[1]
        inside = (u > 0) & (v > 0)
        return np.where(inside, np.exp(-np.where(inside, u + v, 0.0)), 0.0)

    def default_domain(self, mass_tol: float, nx: int = 512, ny: int = 512) -> Domain:
        # mass beyond the triangle u + v <= L is (1 + L) e^{-L}, which bounds the box tail
        tail = lambda L: (1.0 + L) * math.exp(-L) - mass_tol
        length = brentq(tail, 0.0, 800.0, xtol=1e-14)
        ox, oy = self.origin
        return Domain(ox, ox + length, oy, oy + length, nx, ny)


@dataclass(frozen=True)
class UniformBox:
    box: tuple[float, float, float, float]

    def __post_init__(self):
        x0, x1, y0, y1 = self.box
        if not (x0 < x1 and y0 < y1):
            raise ValueError("uniform box requires x0 < x1 and y0 < y1")

    @property
    def area(self) -> float:
        x0, x1, y0, y1 = self.box
        return (x1 - x0) * (y1 - y0)

    def density(self, x, y):
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        x0, x1, y0, y1 = self.box
        inside = (x >= x0) & (x <= x1) & (y >= y0) & (y <= y1)
        return np.where(inside, 1.0 / self.area, 0.0)

    def default_domain(self, mass_tol: float, nx: int = 512, ny: int = 512) -> Domain:
        return Domain(*self.box, nx, ny)


@dataclass(frozen=True, eq=False)
class Gridded:
    """Density given on a grid, interpolated bilinearly between centres.

    Construction validates nonnegativity and that the total mass lies in
    ``[0.999, 1.001]``; the stored field is renormalised to mass one.
    """

    field: ScalarField

    def __post_init__(self):
        if not self.field.is_nonnegative():
            raise ValueError("gridded prior has negative values")
        mass = integrate(self.field)
        lo, hi = GRIDDED_MASS_BAND
        if not (lo <= mass <= hi):
            raise ValueError(f"gridded prior mass {mass:.6g} outside [{lo}, {hi}]")
        object.__setattr__(self, "field", ScalarField(self.field.domain, self.field.values / mass))

    @classmethod
    def from_csv(cls, path) -> "Gridded":
        return cls(read_field_csv(path))

    def density(self, x, y):
        return self.field.interpolate(x, y)

    def default_domain(self, mass_tol: float = 1e-5, nx: int | None = None, ny: int | None = None) -> Domain:
        return self.field.domain


def density(prior, point) -> float:
    """Density of ``prior`` at a single point ``(x, y)``."""
    x, y = point
    return float(prior.density(x, y))


def discretize(prior, domain: Domain) -> ScalarField:
    """Sample ``prior`` at the cell centres of ``domain``.

    A gridded prior on exactly ``domain`` returns its stored values.
    """
    if isinstance(prior, Gridded) and prior.field.domain == domain:
        return prior.field
    xs, ys = domain.mesh()
    return ScalarField(domain, prior.density(xs, ys))


def truncation_mass(field: ScalarField) -> float:
    """Prior mass missing from a discretised density, ``1 - integral``."""
    return 1.0 - integrate(field)


def default_domain(prior, mass_tol: float = 1e-5, nx: int = 512, ny: int = 512) -> Domain:
    if not 0.0 < mass_tol < 1.0:
        raise ValueError("mass_tol must lie in (0, 1)")
    return prior.default_domain(mass_tol, nx, ny)


def is_non_uniform(field: ScalarField, tol: float = 1e-9) -> bool:
    """True when the relative std of the density over its support exceeds ``tol``."""
    vals = field.values[field.values > 0]
    if vals.size == 0:
        raise DomainError("density has empty support on this grid")
    return bool(np.std(vals) / np.mean(vals) > tol)
