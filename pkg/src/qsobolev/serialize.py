"""JSON and text forms of scalars, polynomials and rational functions.

An exact scalar is ``{"num": [...], "den": [...]}`` with the Z-polynomial
coefficients as "p/q" strings, constant term first.  Approximate scalars
are ``{"value": "<decimal>"}``.
"""

from __future__ import annotations

from fractions import Fraction

from .qpoly import Poly, RatFunX
from .scalar import MP, RealScalar, ZRat, parse_rational


def scalar_to_json(c) -> dict:
    if isinstance(c, RealScalar):
        return {"value": MP.nstr(c.v, 30)}
    if not isinstance(c, ZRat):
        c = ZRat.const(Fraction(c))
    return {"num": [str(v) for v in c.num] or ["0"], "den": [str(v) for v in c.den]}


def scalar_from_json(obj: dict):
    if "value" in obj:
        return RealScalar(MP.mpf(obj["value"]))
    return ZRat([parse_rational(t) for t in obj["num"]], [parse_rational(t) for t in obj["den"]])


def poly_to_json(p: Poly) -> list[dict]:
    return [scalar_to_json(c) for c in p.coeffs]


def poly_from_json(items) -> Poly:
    return Poly(scalar_from_json(o) for o in items)


def ratfun_to_json(r: RatFunX) -> dict:
    return {"num": poly_to_json(r.num), "den": poly_to_json(r.den)}


def ratfun_from_json(obj: dict) -> RatFunX:
    return RatFunX(poly_from_json(obj["num"]), poly_from_json(obj["den"]))
