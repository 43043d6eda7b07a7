"""Exception taxonomy shared by every module in the package.

The split matters for the command line tool, which maps each class to a
distinct exit code: bad values (DomainError, SpecMismatchError) are usage
problems, resource guards (BoundsError, CoverageError, CostError) are
refusals, and ToleranceError signals a numerical target that was not met.
"""

__all__ = [
    "FriableError",
    "DomainError",
    "BoundsError",
    "CoverageError",
    "CostError",
    "ToleranceError",
    "SpecMismatchError",
]


class FriableError(Exception):
    """Base class for all package-specific errors."""


class DomainError(FriableError, ValueError):
    """Argument outside the mathematical domain (e.g. s <= 0, u <= 1)."""


class BoundsError(FriableError, ValueError):
    """Argument outside a configured limit (sieve size, table range)."""


class CoverageError(FriableError, ValueError):
    """Evaluation point outside the computed coverage of a solution."""


class CostError(FriableError, RuntimeError):
    """Refusing work whose cost guard is exceeded."""


class ToleranceError(FriableError, RuntimeError):
    """A quadrature or root-finding step failed to reach its target."""


class SpecMismatchError(FriableError, ValueError):
    """Two objects that must share parameters (a, b) do not."""
