"""Exception hierarchy shared across the package.

The CLI maps each branch of the hierarchy to a process exit code:
validation problems exit with 2, data problems with 3 and numerical
failures with 4.
"""


class TmaTestError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ValidationError(TmaTestError, ValueError):
    """Invalid orders, parameters, grids or configuration values."""

    exit_code = 2


class DataError(TmaTestError, ValueError):
    """Unreadable, malformed or non-finite input data."""

    exit_code = 3


class NumericalError(TmaTestError, RuntimeError):
    """A numerical procedure failed beyond recovery."""

    exit_code = 4


class KernelDegenerateError(NumericalError):
    """Covariance factorization failed even after maximal jitter."""


class ExperimentError(NumericalError):
    """Too many replications of a Monte Carlo experiment failed."""
