"""Rectangular domains, cell-centred scalar fields and midpoint quadrature.

Every integral over the search area is realised here as a midpoint sum
over a regular ``nx`` by ``ny`` grid.  Field values are stored as arrays of
shape ``(ny, nx)`` so that flattening in C order gives the row-major
(x fastest) ordering used by :func:`cell_centers` and the CSV format.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError

__all__ = [
    "Domain",
    "ScalarField",
    "integrate",
    "sup_norm",
    "cell_centers",
    "masked_stats",
    "write_field_csv",
    "read_field_csv",
]


@dataclass(frozen=True)
class Domain:
    """Axis-aligned box ``[x_min, x_max] x [y_min, y_max]`` split into cells."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int = 512
    ny: int = 512

    def __post_init__(self):
        vals = (self.x_min, self.x_max, self.y_min, self.y_max)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError("domain bounds must be finite")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("domain requires x_min < x_max and y_min < y_max")
        if int(self.nx) != self.nx or int(self.ny) != self.ny:
            raise ValueError("cell counts must be integers")
        if self.nx < 2 or self.ny < 2:
            raise ValueError("domain requires nx >= 2 and ny >= 2")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.nx

    @property
    def dy(self) -> float:
        return (self.y_max - self.y_min) / self.ny

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    @property
    def area(self) -> float:
        return (self.x_max - self.x_min) * (self.y_max - self.y_min)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        """Cell-centre coordinates along each axis."""
        xs = self.x_min + (np.arange(self.nx) + 0.5) * self.dx
        ys = self.y_min + (np.arange(self.ny) + 0.5) * self.dy
        return xs, ys

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Cell-centre coordinate arrays of shape ``(ny, nx)``."""
        xs, ys = self.axes()
        return np.meshgrid(xs, ys, indexing="xy")

    def contains(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return (
            (x >= self.x_min) & (x <= self.x_max)
            & (y >= self.y_min) & (y <= self.y_max)
        )

    def with_resolution(self, nx: int, ny: int) -> "Domain":
        return Domain(self.x_min, self.x_max, self.y_min, self.y_max, nx, ny)


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Values of a function at the cell centres of ``domain``."""

    domain: Domain
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.size != self.domain.nx * self.domain.ny:
            raise ValueError(
                f"expected {self.domain.nx * self.domain.ny} values, got {vals.size}"
            )
        vals = vals.reshape(self.domain.shape)
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def constant(cls, domain: Domain, value: float) -> "ScalarField":
        return cls(domain, np.full(domain.shape, float(value)))

    @classmethod
    def zeros(cls, domain: Domain) -> "ScalarField":
        return cls.constant(domain, 0.0)

    def __add__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __mul__(self, other):
        return self._combine(other, np.multiply)

    __rmul__ = __mul__

    def _combine(self, other, op):
        if isinstance(other, ScalarField):
            if other.domain != self.domain:
                raise DomainError("fields live on different domains")
            other = other.values
        return ScalarField(self.domain, op(self.values, other))

    def is_nonnegative(self) -> bool:
        return bool(np.all(self.values >= 0.0))

    def interpolate(self, x, y) -> np.ndarray:
        """Bilinear interpolation between cell centres.

        Inside the half-cell border between the outermost centres and the
        domain edge the nearest centre row/column is used.  Queries outside
        the domain raise :class:`DomainError`.
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if not np.all(self.domain.contains(x, y)):
            raise DomainError("interpolation query outside the field's domain")
        d = self.domain
        # fractional index relative to the first centre
        fx = np.clip((x - d.x_min) / d.dx - 0.5, 0.0, d.nx - 1)
        fy = np.clip((y - d.y_min) / d.dy - 0.5, 0.0, d.ny - 1)
        i0 = np.minimum(np.floor(fx).astype(int), d.nx - 2)
        j0 = np.minimum(np.floor(fy).astype(int), d.ny - 2)
        tx = fx - i0
        ty = fy - j0
        v = self.values
        return (
            v[j0, i0] * (1 - tx) * (1 - ty)
            + v[j0, i0 + 1] * tx * (1 - ty)
            + v[j0 + 1, i0] * (1 - tx) * ty
            + v[j0 + 1, i0 + 1] * tx * ty
        )


def integrate(field: ScalarField) -> float:
    """Midpoint-rule integral of ``field`` over its domain.

    ``np.sum`` uses pairwise summation, so the result is deterministic and
    exact for fields that are constant per cell.
    """
    return float(np.sum(field.values) * field.domain.cell_area)


def sup_norm(field: ScalarField) -> float:
    return float(np.max(np.abs(field.values)))


def cell_centers(domain: Domain) -> np.ndarray:
    """Row-major ``(nx*ny, 2)`` array of cell midpoints, x varying fastest."""
    xs, ys = domain.mesh()
    return np.column_stack([xs.ravel(), ys.ravel()])


def masked_stats(values: np.ndarray, mask: np.ndarray) -> dict:
    """Mean, max absolute deviation and relative std of ``values[mask]``."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise ValueError("statistics requested over an empty region")
    sel = np.asarray(values, dtype=float)[mask]
    mean = float(np.mean(sel))
    dev = float(np.max(np.abs(sel - mean)))
    std = float(np.std(sel))
    if mean != 0.0:
        rel_std = std / abs(mean)
    else:
        rel_std = 0.0 if std == 0.0 else float("inf")
    return {"mean": mean, "max_abs_dev": dev, "rel_std": rel_std}


def _format(v: float) -> str:
    return format(float(v), ".17g")


def write_field_csv(field: ScalarField, path) -> None:
    """Write ``field`` as ``x,y,value`` rows in row-major order."""
    buf = io.StringIO()
    buf.write("x,y,value\n")
    centers = cell_centers(field.domain)
    for (cx, cy), val in zip(centers, field.values.ravel()):
        buf.write(f"{_format(cx)},{_format(cy)},{_format(val)}\n")
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def read_field_csv(path) -> ScalarField:
    """Read a field written by :func:`write_field_csv`.

    The domain is reconstructed from the cell centres, which must form a
    complete regular lattice listed in row-major order.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["x", "y", "value"]:
            raise ValueError(f"{path}: expected header 'x,y,value'")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 columns")
            try:
                rows.append([float(c) for c in row])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    data = np.array(rows, dtype=float)
    if data.ndim != 2 or len(data) < 4:
        raise ValueError(f"{path}: too few rows for a 2x2 grid")
    xs = np.unique(data[:, 0])
    ys = np.unique(data[:, 1])
    nx, ny = len(xs), len(ys)
    if nx * ny != len(data):
        raise ValueError(f"{path}: cell centres do not form a complete lattice")
    dx = (xs[-1] - xs[0]) / (nx - 1)
    dy = (ys[-1] - ys[0]) / (ny - 1)
    if not (np.allclose(np.diff(xs), dx, rtol=1e-9) and np.allclose(np.diff(ys), dy, rtol=1e-9)):
        raise ValueError(f"{path}: cell centres are not evenly spaced")
    domain = Domain(xs[0] - dx / 2, xs[-1] + dx / 2, ys[0] - dy / 2, ys[-1] + dy / 2, nx, ny)
    expect = cell_centers(domain)
    if not np.allclose(data[:, :2], expect, rtol=1e-9, atol=1e-12 * max(dx, dy)):
        raise ValueError(f"{path}: rows are not in row-major order")
    return ScalarField(domain, data[:, 2])
