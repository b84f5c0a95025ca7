"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class DimensionError(ValueError):
    """A discretization dimension is too small or inconsistent."""


class QuadratureError(ArithmeticError):
    """Two successive quadrature resolutions disagree beyond tolerance."""


class SingularSystemError(ArithmeticError):
    """A linear system that should be regular came out singular."""


class ConvergenceError(ArithmeticError):
    """An iterative or dense solver failed to converge."""
