"""Exact computations with locally nilpotent derivations and delta-modules."""

from .derivation import Derivation, LocalizedElement
from .dmodule import DeltaModule, ModuleElement
from .errors import LndError, ParseError
from .ring import Polynomial, Ring, parse_poly

__all__ = [
    "DeltaModule",
    "Derivation",
    "LndError",
    "LocalizedElement",
    "ModuleElement",
    "ParseError",
    "Polynomial",
    "Ring",
    "parse_poly",
]

__version__ = "0.1.0"
