"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation.

    ``field`` names the offending argument when there is a single culprit.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class RangeError(OverflowError):
    """Inputs are too large to evaluate reliably (overflow scale)."""


class AccuracyError(ArithmeticError):
    """A truncation or quadrature did not reach the requested accuracy.

    Whatever was computed before giving up is kept on ``partial`` so the
    caller can inspect it; ``estimates`` holds competing estimates when
    the failure is a disagreement between two of them.
    """

    def __init__(self, message, partial=None, estimates=None):
        super().__init__(message)
        self.partial = partial
        self.estimates = estimates


class FitError(ArithmeticError):
    """Least-squares fit is ill-posed (degenerate design matrix, bad data)."""


class InvariantViolation(AssertionError):
    """A runtime invariant that the theory guarantees was found broken."""


class UnderflowWarning(RuntimeWarning):
    """A result underflowed double precision and was returned as 0.0."""
