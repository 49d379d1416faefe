"""Exact Darboux integrability analysis for polynomial vector fields in three variables."""

from .ratpoly import Polynomial, format_polynomial, parse_polynomial
from .vectorfield import GDParams, VectorField, make_gd, make_named

__all__ = ["GDParams", "Polynomial", "VectorField", "format_polynomial", "make_gd", "make_named", "parse_polynomial"]
__version__ = "0.1.0"
