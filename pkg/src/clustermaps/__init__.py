"""Mutation-periodic quivers, their cluster recurrences and integrability checks."""

from ._accel import backend
from .dynamics import (
    Orbit,
    Period2Spec,
    RecurrenceSpec,
    iterate,
    iterate_period2,
    iterate_symbolic,
    verify_laurent,
)
from .errors import ClusterMapsError
from .laurent import LaurentPoly
from .quiver import (
    QuiverMatrix,
    build_period1,
    build_period2,
    decompose_period1,
    detect_period,
    mutate,
    primitive,
)
from .tropical import classify_entropy, growth_fit, tropical_degrees

__all__ = [
    "ClusterMapsError",
    "LaurentPoly",
    "Orbit",
    "Period2Spec",
    "QuiverMatrix",
    "RecurrenceSpec",
    "backend",
    "build_period1",
    "build_period2",
    "classify_entropy",
    "decompose_period1",
    "detect_period",
    "growth_fit",
    "iterate",
    "iterate_period2",
    "iterate_symbolic",
    "mutate",
    "primitive",
    "tropical_degrees",
    "verify_laurent",
]

__version__ = "0.1.0"
