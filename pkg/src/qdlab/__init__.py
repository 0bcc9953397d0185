"""qdlab: a numerical laboratory for distinguishing quantum Hamiltonians.

Closed-form evolution under small dense Hamiltonians and standard noise
channels, minimum-error and entanglement-assisted discrimination strategies,
continuous-time search, adaptive bitwise frequency estimation, frequency
metrology under decoherence, and spectral-arc inequalities for driven
evolution, with a seeded batch CLI (`qd`).
"""

__version__ = "0.1.0"

from . import (  # noqa: F401
    discrimination,
    dynamics,
    metrology,
    phase_estimation,
    qmath,
    search,
    spectral_arc,
    tolerances,
)
from .errors import (  # noqa: F401
    NoDiscriminationError,
    ResourceLimitError,
    UnsupportedModelError,
)
