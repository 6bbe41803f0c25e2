"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the supported domain of an operation."""


class HypothesisError(DomainError):
    """Parameter point violates the hypotheses of an inequality check."""


class ConvergenceError(ArithmeticError):
    """A series, quadrature or search failed to reach the requested tolerance."""


class AccuracyError(ArithmeticError):
    """A runtime sanity bound on a computed value was violated."""
