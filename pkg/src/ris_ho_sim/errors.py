"""Exception types shared across the simulator."""


class RisHoSimError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(RisHoSimError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(RisHoSimError, ValueError):
    """A numeric argument lies outside the mathematical domain of an operation."""


class SingularFocusError(DomainError):
    """The closed-form focusing gain was requested exactly at the focal depth,
    where the focal-deviation ratio is undefined. Use the integral form there."""


class DegenerateDistributionError(RisHoSimError, ValueError):
    """A density was requested for a zero-variance (point-mass) distribution."""


class NumericalFailureError(RisHoSimError, RuntimeError):
    """A numerical routine exhausted its refinement budget.

    Carries the best value computed so far and the achieved error estimate so
    callers can decide whether the partial result is still usable.
    """

    def __init__(self, message, value=None, error_estimate=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class ConfigError(RisHoSimError, ValueError):
    """Experiment configuration failed validation. ``errors`` lists every
    violation found, not just the first."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
