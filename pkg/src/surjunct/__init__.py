"""Surjunctivity analysis for algebraic Z^d-actions defined by Laurent polynomials."""

from .errors import (
    ConvergenceError,
    InconsistentReportError,
    ParseError,
    SurjunctError,
    ZeroPolynomialError,
)
from .laurent import LaurentPoly, normalize
from .parser import PolySource, format_poly, parse
from .univariate import UnivariateIntPoly

__all__ = [
    "ConvergenceError",
    "InconsistentReportError",
    "LaurentPoly",
    "ParseError",
    "PolySource",
    "SurjunctError",
    "UnivariateIntPoly",
    "ZeroPolynomialError",
    "format_poly",
    "normalize",
    "parse",
]

__version__ = "0.1.0"
