"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input violates a documented precondition (exponent range, shape, ...)."""


class NumericError(ArithmeticError):
    """NaN or overflow encountered during an iterative computation."""

    def __init__(self, message, restart=None):
        super().__init__(message if restart is None else f"{message} (restart {restart})")
        self.restart = restart
