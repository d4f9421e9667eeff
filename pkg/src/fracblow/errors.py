"""Exception hierarchy shared by all fracblow engines."""


class FracblowError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(FracblowError, ValueError):
    """Input violates a documented hypothesis or invariant."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class DomainError(FracblowError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class AccuracyError(FracblowError, ArithmeticError):
    """Quadrature failed to reach the requested tolerance."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ResolutionError(FracblowError):
    """Grid or box too coarse/small for the requested computation."""

    def __init__(self, message, tail_mass=None):
        super().__init__(message)
        self.tail_mass = tail_mass


class DivergenceError(FracblowError):
    """A dilation G_i(t) stays bounded where unbounded growth is required."""


class BallViolationError(FracblowError):
    """A Picard iterate left the ball of radius R."""

    def __init__(self, message, norm=None):
        super().__init__(message)
        self.norm = norm


class StabilityError(FracblowError):
    """Negativity could not be controlled by step reduction."""


class BlowUpEvent(Exception):
    """Raised by a single solver step when the nonlinearity overflows.

    Not an error: the driver turns it into a blow-up verdict.
    """

    def __init__(self, time):
        super().__init__(f"non-finite values at t={time:g}")
        self.time = time
