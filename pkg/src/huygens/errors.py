"""Exception hierarchy shared by all modules."""


class HuygensError(Exception):
    """Base class for every error raised by the package."""


class InvalidParameterError(HuygensError, ValueError):
    """A parameter violates its domain (non-positive mass, beta >= 1/n, ...)."""


class ConfigError(HuygensError, ValueError):
    """Malformed or inconsistent run configuration."""


class ShapeError(HuygensError, ValueError):
    """State vector length does not match the model."""


class NumericError(HuygensError, ArithmeticError):
    """Non-finite values where finite ones are required."""


class IntegrationError(NumericError):
    """Adaptive integration failed (step-size underflow or blow-up).

    Attributes
    ----------
    t_last : float
        Last time reached with a finite, accepted state.
    """

    def __init__(self, message, t_last):
        super().__init__(f"{message} (last good time t={t_last:.17g})")
        self.t_last = t_last


class DegeneracyError(NumericError):
    """Matrix is defective or nearly so (coalescing eigenvalues)."""


class ResonanceError(NumericError):
    """Critical eigenvalue sits ambiguously close to an (half-)integer multiple."""


class NoSolutionError(HuygensError):
    """Amplitude equations have no non-trivial solution from the given seed."""


class TrivialSolutionError(NoSolutionError):
    """Newton iteration collapsed onto the trivial solution r = 0."""


class DegenerateSolutionError(HuygensError):
    """Solution unusable for period/stability analysis (zero reference amplitude)."""


class InsufficientDataError(HuygensError):
    """Not enough signal in a trajectory window to measure a quantity."""
