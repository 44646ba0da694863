"""
Exceptions and warnings raised by the OCS numerical core.
"""


class OCSError(Exception):
    """Base class for every error raised by ocs_cli."""


class InvalidIndexError(OCSError, ValueError):
    """A Zernike (n, m) pair or single index violates the parity/bound rules."""


class DomainError(OCSError, ValueError):
    """A parameter lies outside the range an operation is defined on."""


class RingIndexError(OCSError, IndexError):
    """A ring index does not exist in the pattern."""


class SizeMismatchError(OCSError, ValueError):
    """Node count or sample length does not match the basis dimension."""


class SingularMatrixError(OCSError, ArithmeticError):
    """The collocation matrix is singular to working precision."""


class RankDeficiencyError(SingularMatrixError):
    """Least-squares matrix has numerical rank below its column count."""


class ConvergenceError(OCSError, ArithmeticError):
    """A numerical procedure missed its accuracy target within its budget."""


class ExtrapolationWarning(UserWarning):
    """Fitted radii formula used outside the orders it was fitted on."""


class BudgetExhaustedWarning(UserWarning):
    """The optimizer ran out of objective evaluations before converging."""
