"""Exception types raised by optsearch."""


class OptSearchError(Exception):
    """Base class for all package errors."""


class DomainError(OptSearchError, ValueError):
    """A point or field lies outside the domain it was defined on."""


class ModelRegularityError(OptSearchError):
    """A detection model violates the regularity hypothesis."""


class InfeasibleBudgetError(OptSearchError):
    """The domain cannot absorb the requested effort.

    Attributes
    ----------
    budget : float
        Requested effort.
    max_effort : float
        Largest total allocation reached while bracketing the threshold.
    """

    def __init__(self, budget, max_effort):
        self.budget = float(budget)
        self.max_effort = float(max_effort)
        super().__init__(
            f"budget {self.budget:.6g} is infeasible; "
            f"max absorbable effort is {self.max_effort:.6g}"
        )


class ConfigError(OptSearchError, ValueError):
    """A scenario configuration could not be parsed."""
