"""Exact computations with invariant convex cones in Lie algebras."""

from .algebra import (
    ConelabError,
    Element,
    LieAlgebra,
    LinearMap,
    MalformedInput,
    NotNilpotent,
    bracket,
    exp_ad,
    is_ad_nilpotent,
    jordan_decomposition,
    killing_form,
)
from .spindler import AdmissibilityWitness, SpindlerAlgebra, SpindlerData, build

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityWitness",
    "ConelabError",
    "Element",
    "LieAlgebra",
    "LinearMap",
    "MalformedInput",
    "NotNilpotent",
    "SpindlerAlgebra",
    "SpindlerData",
    "bracket",
    "build",
    "exp_ad",
    "is_ad_nilpotent",
    "jordan_decomposition",
    "killing_form",
]
