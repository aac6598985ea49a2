"""Exception hierarchy shared by all okunlib modules.

Every error carries an ``exit_code`` so the CLI can map whole error
families to process exit codes without inspecting messages:
2 = data/contract violation, 3 = infeasible constraints, 4 = I/O.
"""

from __future__ import annotations


class OkunlibError(Exception):
    """Base class for all okunlib errors."""

    exit_code = 2


class DomainError(OkunlibError):
    """A value is outside the mathematical domain of an operation."""


class MissingYearError(OkunlibError):
    """A required year is absent from a series."""


class GapError(OkunlibError):
    """A year (or quarter) gap breaks a contiguity requirement."""


class NoOverlapError(OkunlibError):
    """Two series share no common years."""


class SingularFitError(OkunlibError):
    """Regressors are rank deficient; the least-squares solve is unstable."""


class DegenerateRegressionError(OkunlibError):
    """The measured-on-predicted regression has a zero-variance regressor."""


class RefusedError(OkunlibError):
    """An operation was refused to guard against statistic shopping."""


class ValidationError(OkunlibError):
    """A CSV file or manifest violates its declared contract."""


class ConstraintError(OkunlibError):
    """Search constraints admit no feasible placement."""

    exit_code = 3


class DataIOError(OkunlibError):
    """A file could not be read, parsed or written."""

    exit_code = 4


class GapWarning(UserWarning):
    """A year gap caused points to be omitted from a derived series."""


class OkunSignWarning(UserWarning):
    """A fitted slope violates the expected negative sign convention."""
