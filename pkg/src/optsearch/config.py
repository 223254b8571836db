"""JSON scenario configuration.

Example::

    {
      "prior": {"family": "corner_exponential", "origin": [0, 0]},
      "detection": {"family": "exponential", "alpha": 1.0},
      "W": 1.0, "v": 5.0,
      "domain": [0, 15, 0, 15],
      "grid": [512, 512],
      "mass_tol": 1e-5
    }

Prior families: ``circular_normal`` {sigma, center}, ``corner_exponential``
{origin}, ``uniform_box`` {box}, ``gridded`` {path}.  Detection families:
``exponential`` {alpha}, ``spatial_exponential`` {beta: "norm_sq" | path}.
Relative paths are resolved against the config file's directory.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from . import priors
from .detection import Exponential, SpatialExponential
from .errors import ConfigError
from .grid import Domain, read_field_csv
from .planner import Scenario

log = logging.getLogger(__name__)

__all__ = ["ScenarioConfig", "load_config", "parse_config"]

_TOP_KEYS = {"prior", "detection", "W", "v", "domain", "grid", "mass_tol", "name"}


@dataclass
class ScenarioConfig:
    prior: Any
    detection: Any
    W: float
    v: float
    domain: Optional[tuple[float, float, float, float]] = None
    grid: Optional[tuple[int, int]] = None
    mass_tol: float = 1e-5
    name: str = "scenario"

    def build(self, grid=None, domain=None) -> Scenario:
        """Assemble a :class:`Scenario`; ``grid``/``domain`` override the config."""
        native = None
        if isinstance(self.prior, priors.Gridded):
            native = (self.prior.field.domain.nx, self.prior.field.domain.ny)
        nx, ny = grid or self.grid or native or (512, 512)
        box = domain or self.domain
        try:
            if box is not None:
                dom = Domain(*box, nx, ny)
            else:
                dom = priors.default_domain(self.prior, self.mass_tol, nx, ny)
                if isinstance(self.prior, priors.Gridded) and (nx, ny) != (dom.nx, dom.ny):
                    dom = dom.with_resolution(nx, ny)
        except ValueError as exc:
            raise ConfigError(f"domain: {exc}") from None
        sc = Scenario(self.prior, self.detection, self.W, self.v, dom)
        if not sc.covers_prior(self.mass_tol):
            log.warning("domain does not cover the prior at mass_tol=%g", self.mass_tol)
        return sc


def _num(d: dict, key: str, where: str, positive: bool = True) -> float:
    if key not in d:
        raise ConfigError(f"{where}.{key}: missing")
    val = d[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
        raise ConfigError(f"{where}.{key}: expected a finite number, got {val!r}")
    if positive and not val > 0:
        raise ConfigError(f"{where}.{key}: must be positive")
    return float(val)


def _point(d: dict, key: str, where: str, default=(0.0, 0.0)) -> tuple[float, float]:
    val = d.get(key, list(default))
    if not (isinstance(val, (list, tuple)) and len(val) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in val)):
        raise ConfigError(f"{where}.{key}: expected [x, y]")
    return (float(val[0]), float(val[1]))


def _box(val, where: str) -> tuple[float, float, float, float]:
    if not (isinstance(val, (list, tuple)) and len(val) == 4
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in val)):
        raise ConfigError(f"{where}: expected [x_min, x_max, y_min, y_max]")
    x0, x1, y0, y1 = (float(v) for v in val)
    if not (x0 < x1 and y0 < y1):
        raise ConfigError(f"{where}: requires x_min < x_max and y_min < y_max")
    return (x0, x1, y0, y1)


def _path(base: Path, val, where: str) -> Path:
    if not isinstance(val, str):
        raise ConfigError(f"{where}: expected a file path")
    p = Path(val)
    return p if p.is_absolute() else base / p


def _parse_prior(d, base: Path):
    if not isinstance(d, dict):
        raise ConfigError("prior: expected an object")
    fam = d.get("family")
    if fam == "circular_normal":
        return priors.CircularNormal(_num(d, "sigma", "prior"), _point(d, "center", "prior"))
    if fam == "corner_exponential":
        return priors.CornerExponential(_point(d, "origin", "prior"))
    if fam == "uniform_box":
        return priors.UniformBox(_box(d.get("box"), "prior.box"))
    if fam == "gridded":
        path = _path(base, d.get("path"), "prior.path")
        try:
            return priors.Gridded.from_csv(path)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"prior.path: {exc}") from None
    raise ConfigError(f"prior.family: unknown family {fam!r}")


def _parse_detection(d, base: Path):
    if not isinstance(d, dict):
        raise ConfigError("detection: expected an object")
    fam = d.get("family")
    if fam == "exponential":
        return Exponential(_num(d, "alpha", "detection"))
    if fam == "spatial_exponential":
        beta = d.get("beta", "norm_sq")
        if beta == "norm_sq":
            return SpatialExponential("norm_sq")
        path = _path(base, beta, "detection.beta")
        try:
            return SpatialExponential(read_field_csv(path))
        except (OSError, ValueError) as exc:
            raise ConfigError(f"detection.beta: {exc}") from None
    raise ConfigError(f"detection.family: unknown family {fam!r}")


def parse_config(data: dict, base: Path | str = ".") -> ScenarioConfig:
    base = Path(base)
    if not isinstance(data, dict):
        raise ConfigError("config: expected a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"config: unknown keys {sorted(unknown)}")
    for key in ("prior", "detection"):
        if key not in data:
            raise ConfigError(f"{key}: missing")
    cfg = ScenarioConfig(
        prior=_parse_prior(data["prior"], base),
        detection=_parse_detection(data["detection"], base),
        W=_num(data, "W", "config"),
        v=_num(data, "v", "config"),
        name=str(data.get("name", "scenario")),
    )
    if data.get("domain") is not None:
        cfg.domain = _box(data["domain"], "domain")
    if data.get("grid") is not None:
        g = data["grid"]
        if not (isinstance(g, (list, tuple)) and len(g) == 2
                and all(isinstance(n, int) and not isinstance(n, bool) and n >= 2 for n in g)):
            raise ConfigError("grid: expected [nx, ny] with integers >= 2")
        cfg.grid = (g[0], g[1])
    if "mass_tol" in data:
        tol = _num(data, "mass_tol", "config")
        if not tol < 1:
            raise ConfigError("config.mass_tol: must lie in (0, 1)")
        cfg.mass_tol = tol
    return cfg


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return parse_config(data, path.parent)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None
