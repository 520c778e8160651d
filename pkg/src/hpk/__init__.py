"""Exact computer algebra for derived Poisson algebras, homotopy transfer and
Lie pairs."""

from .errors import (ArgumentError, ArityError, HPKError, NonTerminationError,
                     PreconditionError, StabilizationError, StructuralError)
from .graded import (GradedSpace, MultiMap, SymWord, canonicalize_word, decalage,
                     inverse_decalage, koszul_sign)

__version__ = "0.1.0"

__all__ = ["ArgumentError", "ArityError", "HPKError", "NonTerminationError",
           "PreconditionError", "StabilizationError", "StructuralError", "GradedSpace",
           "MultiMap", "SymWord", "canonicalize_word", "decalage", "inverse_decalage",
           "koszul_sign"]
