"""Exception hierarchy.

Bad files and out-of-range parameters derive from :class:`InputError`.
Solver trouble, including seeds that break the resolvent characterization,
derives from :class:`NumericalError`. The CLI maps each family to its own
exit code.
"""


class LocalSpecError(Exception):
    """Base class for all errors raised by localspec."""


class InputError(LocalSpecError, ValueError):
    """Malformed or inconsistent input data."""


class DegenerateCutError(InputError):
    """A cut with an empty side."""


class DegenerateSeedError(InputError):
    """A seed that cannot be normalized into the D-orthogonal unit sphere."""


class DomainError(InputError):
    """A parameter outside the range where the operation is defined."""


class NumericalError(LocalSpecError, ArithmeticError):
    """Base class for numerical failures."""


class SolverError(NumericalError):
    """An iterative method failed to reach its tolerance.

    ``residual`` holds the best residual seen, ``iterations`` the work spent.
    """

    def __init__(self, message, residual=float("nan"), iterations=0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class PoleError(NumericalError):
    """The shift coincides with a generalized eigenvalue."""


class HypothesisViolation(NumericalError):
    """The seed has no component along the second eigenvector."""


class EmptySweepError(NumericalError):
    """A volume-constrained sweep admitted no prefix."""
