"""Exception hierarchy shared across the package."""


class DesignError(ValueError):
    """Invalid design or design space."""


class MonotonicityError(DesignError):
    pass


class DegenerateChainError(DesignError):
    pass


class BoundsError(DesignError):
    pass


class DomainError(ValueError):
    """Argument outside the domain where a criterion is defined."""


class SingularityError(ArithmeticError):
    """Covariance (or bordered kriging) matrix is singular."""


class ExtrapolationError(DomainError):
    pass


class FactorizationError(ArithmeticError):
    """Dense Cholesky factorization failed (matrix not positive definite)."""


class NoSolutionError(RuntimeError):
    """A root solver could not bracket or converge to a solution.

    ``diagnostics`` carries whatever the solver learned before giving up.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class AccuracyError(RuntimeError):
    """Numerical integration did not reach the requested tolerance."""

    def __init__(self, message, estimate, error):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
