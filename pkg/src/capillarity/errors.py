"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """An argument lies outside the physically admissible domain."""


class SupercriticalError(DomainError):
    """Two-phase quantity requested at or above the critical temperature."""


class ConvergenceError(RuntimeError):
    """An iterative solve failed to reach its tolerance."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class NoSolutionError(RuntimeError):
    """No equilibrium solution exists for the requested parameters."""


class GeometryError(ValueError):
    """Profile geometry does not match the requested operation."""


class FitDegeneracyError(RuntimeError):
    """Too few converged points to perform a fit."""
