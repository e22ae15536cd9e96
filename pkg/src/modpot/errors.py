"""Exception types shared across the package."""


class ModpotError(Exception):
    """Base class for all package errors."""


class DomainError(ModpotError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(ModpotError, ValueError):
    """A user-supplied system component is structurally invalid (e.g. a
    control-region form matrix that is not symmetric positive-definite)."""


class InfeasibleError(ModpotError, RuntimeError):
    """A scenario or boundary-value problem admits no solution of the
    requested kind (cost-level out of range, no sign change in a shooting
    bracket, turning-point hypothesis violated)."""


class ConvergenceError(ModpotError, RuntimeError):
    """An iterative solver exhausted its iteration or subdivision budget."""


class IntegrationError(ModpotError, RuntimeError):
    """Trajectory integration produced a non-finite state."""
