"""Blow-up analysis for weakly coupled systems with distinct fractional diffusions.

Modules:

* ``stable_kernel``: isotropic α-stable densities and their properties
* ``dilation``: time-dependent coefficients and accumulated dilations
* ``criterion``: f_i, F, the divergence test and the power-law exponent rule
* ``ode_blowup``: the comparison ODE system and its explicit lower envelope
* ``mild_solver``: pseudospectral Duhamel solver on a periodic box
* ``cli``: batch command line front end
"""

from .errors import (
    AccuracyError,
    BallViolationError,
    BlowUpEvent,
    DivergenceError,
    DomainError,
    FracblowError,
    ResolutionError,
    StabilityError,
    ValidationError,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "BallViolationError",
    "BlowUpEvent",
    "DivergenceError",
    "DomainError",
    "FracblowError",
    "ResolutionError",
    "StabilityError",
    "ValidationError",
]
