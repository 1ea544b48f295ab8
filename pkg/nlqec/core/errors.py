"""Exception hierarchy shared by every nlqec module.

Two families exist. :class:`ConfigError` marks bad input (a malformed config, a
parameter outside its domain) and maps to exit code 64. :class:`NumericalError`
marks a computation that could not produce a trustworthy result and maps to
exit code 70.
"""


class NLQECError(Exception):
    """Base class of all nlqec errors."""

    exit_code: int = 1


class ConfigError(NLQECError, ValueError):
    """Invalid configuration or input parameters."""

    exit_code = 64


class DomainEmpty(ConfigError):
    """An alphabet domain without admissible parameter values."""


class DomainViolation(ConfigError):
    """A parameter outside the declared alphabet domain."""


class IndexOutOfRange(ConfigError):
    """A site or error index beyond the register or channel size."""


class NumericalError(NLQECError, ArithmeticError):
    """A numerical routine failed or its preconditions do not hold."""

    exit_code = 70


class NonHermitianInput(NumericalError):
    """Matrix is not Hermitian within ``herm_tol``."""


class NonAntiHermitianInput(NumericalError):
    """Matrix is not anti-Hermitian within ``herm_tol``."""


class ConvergenceFailure(NumericalError):
    """A LAPACK driver did not converge."""

    def __init__(self, message: str, iterations: int | None = None):
        super().__init__(message)
        self.iterations = iterations


class NoConvergence(NumericalError):
    """Iterative refinement stopped at its iteration cap."""


class TruncationError(NumericalError):
    """A state leaks more than ``trunc_tol`` into the guard band."""

    def __init__(self, message: str, defect: float | None = None):
        super().__init__(message)
        self.defect = defect


class DegenerateInput(NumericalError):
    """An input for which the requested object is undefined."""


class DegenerateSampleSet(NumericalError):
    """Too few linearly independent alphabet samples."""


class DimensionMismatch(NumericalError):
    """Operands live on spaces of different dimension."""


class NonUnitaryTransform(NumericalError):
    """A Kraus mixing matrix is not unitary within ``eig_tol``."""


class IllConditionedSolve(NumericalError):
    """The sample Gram matrix exceeds ``cond_max``."""

    def __init__(self, message: str, condition: float | None = None):
        super().__init__(message)
        self.condition = condition


class ZeroCoefficientBlock(NumericalError):
    """Every error of a recovery block has vanishing coefficients."""


class ZeroTrace(NumericalError):
    """The channel annihilates the state."""


class InconsistentGamma(NumericalError):
    """The inferred block relation is not transitive."""

    def __init__(self, message: str, flips: int = 0):
        super().__init__(message)
        self.flips = flips
