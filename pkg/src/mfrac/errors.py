"""Exception types shared across the package."""


class MfracError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(MfracError):
    """A parameter, configuration value, or precondition is invalid."""


class DomainError(MfracError):
    """A function was evaluated outside its real domain."""


class ConvergenceError(MfracError):
    """An iterative computation failed to reach its tolerance."""


class ToleranceNotMetError(ConvergenceError):
    """Adaptive quadrature ran out of subdivision budget.

    The best available estimate is kept in ``best`` so callers can still
    inspect how far the computation got.
    """

    def __init__(self, message, best):
        super().__init__(message)
        self.best = best
