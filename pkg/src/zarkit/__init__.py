"""Exact Zariski and integral Zariski decompositions on curve configurations,
with pull-backs, Reider-type checks and extension thresholds."""

from .errors import (
    CapExceededError,
    InputError,
    NotPseudoEffectiveError,
    PreconditionError,
    UndecidableError,
    ZarkitError,
)
from .exact_linalg import DefinitenessClass, SymMatrix, classify_definiteness, signature, solve_linear
from .surface_model import CurveConfiguration, Divisor, intersect
from .zariski import (
    ConnectingChain,
    Decomposition,
    enu_max,
    int_zariski_decompose,
    is_z_positive,
    oracle_int_zariski,
    zariski_decompose,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceededError",
    "ConnectingChain",
    "CurveConfiguration",
    "Decomposition",
    "DefinitenessClass",
    "Divisor",
    "InputError",
    "NotPseudoEffectiveError",
    "PreconditionError",
    "SymMatrix",
    "UndecidableError",
    "ZarkitError",
    "classify_definiteness",
    "enu_max",
    "int_zariski_decompose",
    "intersect",
    "is_z_positive",
    "oracle_int_zariski",
    "signature",
    "solve_linear",
    "zariski_decompose",
]
