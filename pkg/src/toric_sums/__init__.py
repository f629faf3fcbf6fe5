"""Polyhedral invariants and exact finite-field L-functions of toric exponential sums."""

from .conjecture import conjectured_weights
from .hodge import hodge_data
from .laurent import LaurentPolySpec, g_polynomial, parse_document
from .ordinary import global_ordinariness, predicted_slopes
from .polytope import Polytope, build_polytope

__version__ = "0.1.0"

__all__ = [
    "LaurentPolySpec",
    "Polytope",
    "build_polytope",
    "conjectured_weights",
    "global_ordinariness",
    "hodge_data",
    "g_polynomial",
    "parse_document",
    "predicted_slopes",
]
