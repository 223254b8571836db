"""Uniformly optimal search plans for a stationary target."""

from .bayes import PosteriorField, flattening_profile, plateau_constancy, posterior
from .detection import Exponential, GenericRegular, SpatialExponential
from .errors import (
    ConfigError,
    DomainError,
    InfeasibleBudgetError,
    ModelRegularityError,
    OptSearchError,
)
from .grid import Domain, ScalarField, cell_centers, integrate, sup_norm
from .metrics import PlanReport, cost, detection_probability, plan_report, uniformity
from .planner import (
    Plan,
    PlateauRegion,
    Scenario,
    allocate,
    attractiveness,
    attractiveness_inverse,
    incremental,
    plateau_region,
    threshold,
    total_allocation_at,
)
from .priors import CircularNormal, CornerExponential, Gridded, UniformBox

__version__ = "0.1.0"
