"""Exception types shared across the package."""


class SobembedError(Exception):
    """Base class for all package errors."""


class SpaceSpecError(SobembedError, ValueError):
    """Invalid space description (unknown kind, bad parameter, missing field)."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class DegenerateMeasureError(SobembedError):
    """A ball that must carry positive measure was estimated to have none."""

    def __init__(self, message, ball=None):
        self.ball = ball
        super().__init__(message)


class BudgetExceededError(SobembedError):
    """Monte Carlo did not reach the requested accuracy within its sample budget."""

    def __init__(self, message, best_estimate):
        self.best_estimate = best_estimate
        super().__init__(message)


class FitFailureError(SobembedError):
    """Measure data unsuitable for an exponent fit."""

    def __init__(self, message, diagnostics=None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class RangeError(SobembedError, ValueError):
    """Parameters outside the validity range of a criterion or example."""


class HypothesisViolation(RangeError):
    """A standing hypothesis of a criterion fails for the given inputs."""
