"""Exception hierarchy shared across the package."""


class WermaError(Exception):
    """Base class for all package-specific errors."""


class DomainError(WermaError, ValueError):
    """A parameter is outside the domain an operation is defined on."""


class InfeasibilityError(WermaError):
    """The requested quantity does not exist in this regime.

    Typical causes: delta >= 2*pi_plus, where the per-class risks never
    cross and the error-equalizing weight diverges; or a loss with no
    finite minimizer because the data is asymptotically separable.
    """


class NumericError(WermaError, RuntimeError):
    """A numeric procedure failed (ill-conditioning, non-convergence)."""


class ConvergenceError(NumericError):
    """An iterative routine exhausted its budget.

    Attributes carry diagnostics so a caller can decide whether to retry
    with a larger budget or treat the point as divergent.
    """

    def __init__(self, message, *, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class SolverError(NumericError):
    """The asymptotic system solver did not reach its residual tolerance.

    Carries the last iterate (alpha, gamma, lam, bias) and its residuals.
    """

    def __init__(self, message, *, iterate=None, residuals=None):
        super().__init__(message)
        self.iterate = iterate
        self.residuals = residuals


class DegenerateDataError(WermaError, ValueError):
    """Input data is degenerate for the requested computation."""
