"""Exception hierarchy shared by all sendovlab modules."""


class SendovLabError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(SendovLabError, ValueError):
    pass


class DegenerateInputError(InvalidInputError):
    """Raised when a construction is undefined, e.g. a bisector of a zero-length segment."""


class NoIntersectionError(InvalidInputError):
    pass


class DomainError(SendovLabError, ValueError):
    """A radicand or argument left its admissible domain by more than rounding slack."""


class ConvergenceError(SendovLabError, RuntimeError):
    """Root iteration did not meet its residual contract.

    The best iterate and its residuals are attached so callers can inspect
    or report them.
    """

    def __init__(self, message, best=None, residuals=None):
        super().__init__(message)
        self.best = best
        self.residuals = residuals


class NotFoundError(SendovLabError, LookupError):
    pass


class ConfigError(SendovLabError, ValueError):
    pass
