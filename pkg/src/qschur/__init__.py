"""Exact q-Schur algebra engine: flag counting, Hall algebras and generic multiplication."""

from .genmul import ZERO, generic_multiply, gamma, theta, verify_suite
from .hall import HallElement, generic_extension, hall_polynomial, hall_product
from .poly import IntPolynomial, interpolate
from .quivermod import Multisegment
from .schur import SchurElement, chevalley_left, chevalley_right, l_element, multiply

__all__ = [
    "ZERO",
    "HallElement",
    "IntPolynomial",
    "Multisegment",
    "SchurElement",
    "chevalley_left",
    "chevalley_right",
    "gamma",
    "generic_extension",
    "generic_multiply",
    "hall_polynomial",
    "hall_product",
    "interpolate",
    "l_element",
    "multiply",
    "theta",
    "verify_suite",
]

__version__ = "0.1.0"
