"""Exception hierarchy.

Numerical failures (anything the CLI maps to exit code 3) derive from
:class:`NumericalError`; malformed input derives from ``ValueError``.
"""


class QhermError(Exception):
    """Base class for all package errors."""


class NumericalError(QhermError):
    """A computation could not produce a trustworthy result."""


class ConvergenceError(NumericalError):
    pass


class SingularMatrixError(NumericalError):
    pass


class RankDeficientError(NumericalError):
    pass


class OverflowRiskError(NumericalError):
    pass


class UnderResolvedBasisError(NumericalError):
    pass


class EigenpairResidualError(NumericalError):
    pass


class HermiticityError(QhermError, ValueError):
    def __init__(self, residual, tol):
        self.residual = residual
        super().__init__(f"matrix is not Hermitian: residual {residual:.3e} > {tol:.1e}")


class NonFiniteError(QhermError, ValueError):
    pass


class NonFiniteSampleError(NonFiniteError):
    def __init__(self, point, value):
        self.point = point
        super().__init__(f"non-finite sample {value!r} at {point!r}")


class DimensionMismatchError(QhermError, ValueError):
    pass


class BranchError(QhermError, ValueError):
    pass
