"""Exception hierarchy for fracwalk."""


class FracwalkError(Exception):
    """Base class for all fracwalk errors."""


class DomainError(FracwalkError, ValueError):
    """A parameter lies outside the admissible range of an operation."""


class RangeError(FracwalkError, ValueError):
    """A query falls outside the range covered by a stored object."""


class ConfigError(FracwalkError, ValueError):
    """Invalid configuration file or value."""


class ManifestError(FracwalkError):
    """A run manifest cannot be read or replayed."""


class NumericFailure(FracwalkError):
    """A numerical kernel failed to reach its tolerance."""


class ConvergenceError(NumericFailure):
    """A series did not reach tolerance at the working precision."""


class QuadratureError(NumericFailure):
    """Adaptive quadrature did not converge."""


class InversionError(NumericFailure):
    """Numerical Laplace inversion failed its internal error estimate."""


class BudgetError(NumericFailure):
    """A simulation exceeded its event budget."""


class TruncationError(NumericFailure):
    """A truncated series dropped more mass than allowed."""


class NegativityWarning(UserWarning):
    """A density route returned values noticeably below zero."""
