"""Exception types shared across the package."""


class SlowsolError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(SlowsolError, ValueError):
    """A physical parameter violates its constraints."""


class DomainError(SlowsolError, ValueError):
    """An evaluation point lies outside a schedule or trajectory domain."""


class SingularityError(SlowsolError, ArithmeticError):
    """An analytic expression was evaluated at or beyond a singular point."""


class NoSolutionError(SlowsolError, RuntimeError):
    """A calibration problem has no admissible root."""


class DivergedError(SlowsolError, RuntimeError):
    """The field marching scheme left its stability envelope."""

    def __init__(self, message: str, zeta: float | None = None,
                 tau_index: int | None = None):
        super().__init__(message)
        self.zeta = zeta
        self.tau_index = tau_index


class NumericsError(SlowsolError, RuntimeError):
    """Non-finite values appeared during a computation."""


class ConfigError(SlowsolError, ValueError):
    """A scenario configuration is malformed or inconsistent."""
