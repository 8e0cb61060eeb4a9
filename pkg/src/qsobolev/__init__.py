"""Exact Al-Salam--Carlitz I and Sobolev-type q-polynomials over Q(Z)."""

from .context import QContext
from .errors import QSobolevError
from .qpoly import Poly, RatFunX
from .scalar import RealScalar, ZRat

__all__ = ["Poly", "QContext", "QSobolevError", "RatFunX", "RealScalar", "ZRat"]
__version__ = "0.1.0"
