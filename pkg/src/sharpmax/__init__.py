"""Exact computation of sharp constants for discrete maximal operators."""

from .core import CyclicSignal, ExponentTuple, HighPrec, Signal
from .operators import Cyclic, FunctionalSpec, MaximalFunction, PolynomialFamily, maximal

__version__ = "0.1.0"

__all__ = [
    "Cyclic",
    "CyclicSignal",
    "ExponentTuple",
    "FunctionalSpec",
    "HighPrec",
    "MaximalFunction",
    "PolynomialFamily",
    "Signal",
    "maximal",
]
