"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A parameter lies outside the range where the quantity is defined."""


class DomainError(ParameterError):
    """Argument at a pole or outside a function's domain."""


class MappingError(ParameterError):
    """Physical parameters do not map to real polynomial parameters."""


class BreakdownError(ArithmeticError):
    """A three-term recurrence coefficient vanished at ``order``."""

    def __init__(self, message, order=None):
        super().__init__(message)
        self.order = order


class ConvergenceError(ArithmeticError):
    """An iterative solver exhausted its budget."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class FitError(RuntimeError):
    """Asymptotic fit could not be carried out or is not sinusoidal."""
