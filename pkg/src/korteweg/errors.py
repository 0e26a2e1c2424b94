"""Exception hierarchy shared by all modules."""


class KortewegError(Exception):
    """Base class for all package errors."""


class ConfigError(KortewegError, ValueError):
    """Inconsistent configuration (grid/scheme mismatch, bad run file, ...)."""


class DomainError(KortewegError, ValueError):
    """Input outside the mathematical domain of an operation (e.g. rho <= 0)."""


class CompatibilityError(KortewegError, ValueError):
    """Right-hand side violates a solvability constraint (nonzero mean)."""


class SolverError(KortewegError, RuntimeError):
    """Iterative solve failed to reach the requested tolerance."""


class StateError(KortewegError, RuntimeError):
    """Simulation state became inadmissible (density floor, stiffness abort)."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state
