"""Numerical toolkit for complex Hessian cone algebra, moduli of
continuity, barrier envelopes on model domains, and exact radial profiles.
"""

__version__ = "0.1.0"

from . import barrier, core, geometry, modulus, radial  # noqa: F401
from .errors import (  # noqa: F401
    ArgumentError,
    DomainError,
    ExtrapolationError,
    QuadratureError,
)
