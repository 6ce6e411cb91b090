class CohboundError(Exception):
    """Base class for all library errors."""


class InputError(CohboundError, ValueError):
    """Malformed or out-of-contract input (shapes, permutations, files)."""


class SizeError(InputError):
    """Requested dimension exceeds the configured maximum."""


class DomainError(CohboundError, ValueError):
    """Scalar argument outside the domain of a formula."""


class PreconditionError(CohboundError, ValueError):
    """Hypotheses of a bound do not hold for the given profile and parameters.

    ``interval`` carries the feasible interval (or intervals) that was checked.
    """

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class NumericError(CohboundError, ArithmeticError):
    """An iterative numerical routine failed to converge."""
