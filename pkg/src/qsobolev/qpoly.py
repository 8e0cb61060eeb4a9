"""Dense polynomials and reduced rational functions in ``x``, plus q-operators.

Coefficients may be any field elements of one backend (``ZRat``,
``RealScalar``, ``Fraction``); ``int`` inputs are promoted to ``Fraction``.
``RatFunX`` is restricted to exact coefficients because its canonical form
needs polynomial gcds; those are delegated to FLINT.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import flint

from .errors import BackendMismatch, DivisionByZero, ExactDivisionFailed
from .scalar import RealScalar, ZRat

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _promote(c):
    return Fraction(c) if type(c) is int else c


class Poly:
    """Univariate polynomial, coefficients constant term first, no trailing zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_promote(c) for c in coeffs]
        n = len(cs)
        while n and not cs[n - 1]:
            n -= 1
        self.coeffs = tuple(cs[:n])

    @classmethod
    def _raw(cls, coeffs: tuple) -> "Poly":
        p = cls.__new__(cls)
        n = len(coeffs)
        while n and not coeffs[n - 1]:
            n -= 1
        p.coeffs = coeffs if n == len(coeffs) else coeffs[:n]
        return p

    @classmethod
    def x(cls) -> "Poly":
        return cls._raw((_ZERO, _ONE))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls._raw((_promote(c),))

    @classmethod
    def monomial(cls, k: int, c=_ONE) -> "Poly":
        return cls._raw((_ZERO,) * k + (_promote(c),))

    # -- inspection
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else _ZERO

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else _ZERO

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, RatFunX):
            return NotImplemented
        if not isinstance(other, Poly):
            other = Poly.const(other)
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.coeffs)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    # -- ring operations
    def __add__(self, other):
        if isinstance(other, RatFunX):
            return NotImplemented
        if not isinstance(other, Poly):
            other = Poly.const(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly._raw(tuple(out))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, RatFunX):
            return NotImplemented
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RatFunX):
            return NotImplemented
        if not isinstance(other, Poly):
            return self.scale(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(())
        out = [None] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for k, y in enumerate(b):
                t = x * y
                cur = out[i + k]
                out[i + k] = t if cur is None else cur + t
        return Poly._raw(tuple(_ZERO if c is None else c for c in out))

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Poly":
        if not c:
            return Poly._raw(())
        return Poly._raw(tuple(x * c for x in self.coeffs))

    def __pow__(self, n: int) -> "Poly":
        out = Poly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def mul_x(self, k: int = 1) -> "Poly":
        if not self.coeffs:
            return self
        return Poly._raw((_ZERO,) * k + self.coeffs)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Long division; a monic divisor needs no coefficient inverses."""
        if not other:
            raise DivisionByZero("polynomial division by zero")
        db = other.degree
        r = list(self.coeffs)
        if len(r) <= db:
            return Poly._raw(()), self
        lc = other.coeffs[-1]
        monic = lc == 1
        inv = None if monic else 1 / lc
        bc = other.coeffs
        qt = [_ZERO] * (len(r) - db)
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i]
            if not c:
                continue
            if not monic:
                c = c * inv
            qt[i - db] = c
            for k in range(db):
                if bc[k]:
                    r[i - db + k] = r[i - db + k] - c * bc[k]
            r[i] = _ZERO
        return Poly._raw(tuple(qt)), Poly._raw(tuple(r[:db]))

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        qt, r = self.divmod(other)
        if r:
            raise ExactDivisionFailed(f"remainder of degree {r.degree} in exact division")
        return qt

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        if lc == 1:
            return self
        inv = 1 / lc
        return Poly._raw(tuple(c * inv for c in self.coeffs))

    # -- evaluation and substitutions
    def __call__(self, x0):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x0 + c
        return _ZERO if acc is None else acc

    def dilate_by(self, s) -> "Poly":
        """``p(s x)`` for a scalar ``s``."""
        out = []
        pw = _ONE
        for c in self.coeffs:
            out.append(c * pw)
            pw = pw * s
        return Poly._raw(tuple(out))

    def map_coeffs(self, f) -> "Poly":
        return Poly(f(c) for c in self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"

    def __str__(self):
        return poly_str(self)


def poly_str(p: Poly, var: str = "x") -> str:
    from .scalar import pretty

    if not p:
        return "0"
    terms = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        cs = pretty(c)
        if not mono:
            terms.append(cs if " " not in cs else f"({cs})")
        elif c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append(f"-{mono}")
        else:
            terms.append(f"({cs})*{mono}" if " " in cs or "/" in cs else f"{cs}*{mono}")
    return " + ".join(terms).replace("+ -", "- ")


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over the coefficient field (Euclid)."""
    if not a:
        return b.monic()
    while b:
        if b.degree == 0:
            return Poly.const(1)
        a, b = b, a.divmod(b)[1].monic()
    return a.monic()


# -- q-operators on polynomials -------------------------------------------


def _qbase(ctx, ell: int) -> Fraction:
    if ell not in (-1, 1):
        raise ValueError(f"ell must be -1 or 1, got {ell!r}")
    return ctx.q if ell == 1 else 1 / ctx.q


def poly_dilate(ctx, p: Poly, ell: int) -> Poly:
    """``p(q^ell x)``."""
    return p.dilate_by(_qbase(ctx, ell))


def q_derivative(ctx, p, ell: int = 1):
    """Euler--Jackson derivative with base ``q^ell``; x^k -> [k]_{q^ell} x^(k-1).

    Accepts a :class:`Poly` or a :class:`RatFunX`.
    """
    if isinstance(p, RatFunX):
        return q_derivative_rat(ctx, p, ell)
    s = _qbase(ctx, ell)
    out = []
    qk = s  # s^k for k = 1
    for k in range(1, len(p.coeffs)):
        c = p.coeffs[k]
        out.append(c * ((1 - qk) / (1 - s)) if c else c)
        qk *= s
    return Poly._raw(tuple(out))


def q_derivative_iter(ctx, p: Poly, ell: int, k: int) -> Poly:
    if k < 0:
        raise ValueError("k must be non-negative")
    for _ in range(k):
        if not p:
            break
        p = q_derivative(ctx, p, ell)
    return p


def q_derivative_at(ctx, p: Poly, ell: int, k: int, x0):
    return q_derivative_iter(ctx, p, ell, k)(x0)


def q_taylor_polynomial(ctx, p: Poly, alpha, m: int) -> Poly:
    """Degree-``m`` q-Taylor polynomial of ``p`` at ``alpha``."""
    from .qcore import boxminus_pow, qfact

    out = Poly()
    d = p
    for k in range(m + 1):
        if not d:
            break
        coef = d(alpha) / qfact(ctx.q, k)
        if coef:
            out = out + boxminus_pow(ctx, alpha, k).scale(coef)
        d = q_derivative(ctx, d, 1)
    return out


# -- rational functions ---------------------------------------------------
#
# A RatFunX over Q(Z) is stored as a coprime pair (N, D) of polynomials in
# Q[x, Z] whose denominator has leading coefficient 1 in lex order (x > Z).
# Q[x, Z] is a UFD, so that pair is unique; FLINT does the gcds.  Euclid
# over Q(Z)[x] was tried first and suffers severe coefficient growth.

_MCTX = flint.fmpq_mpoly_ctx.get(("x", "Z"), "lex")
_MX, _MZ = _MCTX.gens()
_M0 = _MCTX.from_dict({})
_M1 = _MCTX.from_dict({(0, 0): 1})


def _fq(c: Fraction):
    return flint.fmpq(c.numerator, c.denominator)


def _zpoly(coeffs, xpow: int = 0):
    return _MCTX.from_dict({(xpow, i): _fq(c) for i, c in enumerate(coeffs) if c})


def _coeff_parts(c):
    if isinstance(c, ZRat):
        return c.num, c.den
    if isinstance(c, RealScalar):
        raise BackendMismatch("rational functions need exact coefficients")
    c = Fraction(c)
    return (c,), (_ONE,)


def _poly_to_mpoly(p: Poly):
    """(P, L) with p = P / L, L a polynomial in Z only."""
    lcm = _M1
    for c in p.coeffs:
        if isinstance(c, ZRat) and len(c.den) > 1:
            d = _zpoly(c.den)
            lcm = lcm * d / lcm.gcd(d)
    out = {}
    for k, c in enumerate(p.coeffs):
        if not c:
            continue
        num, den = _coeff_parts(c)
        if lcm is _M1 or lcm.is_one():
            term = _zpoly(num, k) * _fq(1 / den[0]) if len(den) == 1 else _zpoly(num, k) / _zpoly(den)
        else:
            term = _zpoly(num, k) * (lcm / _zpoly(den))
        for mono, v in term.to_dict().items():
            out[mono] = out.get(mono, 0) + v
    return _MCTX.from_dict(out), lcm


def _rows(m) -> dict[int, dict[int, Fraction]]:
    rows: dict[int, dict[int, Fraction]] = {}
    for (ex, ez), c in m.to_dict().items():
        rows.setdefault(ex, {})[ez] = Fraction(int(c.p), int(c.q))
    return rows


def _dense(d: dict[int, Fraction]) -> list[Fraction]:
    out = [_ZERO] * (max(d) + 1)
    for i, c in d.items():
        out[i] = c
    return out


def _mpoly_over(m, lead: list[Fraction]) -> Poly:
    """The polynomial m / lead(Z) in x with Q(Z) coefficients."""
    if m.is_zero():
        return Poly()
    rows = _rows(m)
    const_lead = len(lead) == 1
    out = []
    for k in range(max(rows) + 1):
        if k not in rows:
            out.append(_ZERO)
            continue
        dense = _dense(rows[k])
        if const_lead and len(dense) == 1:
            out.append(dense[0] / lead[0])
        else:
            out.append(ZRat(dense, lead))
    return Poly._raw(tuple(out))


class RatFunX:
    """Reduced rational function in ``x`` over Q(Z).

    ``num`` and ``den`` expose the quotient as two :class:`Poly` objects
    with ``den`` monic in ``x``.
    """

    __slots__ = ("_n", "_d", "_pair")

    def __init__(self, num, den=None):
        if isinstance(num, RatFunX) and den is None:
            self._n, self._d, self._pair = num._n, num._d, num._pair
            return
        n, ln = _as_mpoly(num)
        if den is None:
            d, ld = _M1, _M1
        else:
            d, ld = _as_mpoly(den)
            if d.is_zero():
                raise DivisionByZero("rational function with zero denominator")
        self._set(n * ld, d * ln)

    def _set(self, n, d, reduce: bool = True):
        if n.is_zero():
            n, d = _M0, _M1
        else:
            if reduce and not d.is_constant():
                g = n.gcd(d)
                if not g.is_one():
                    n, d = n / g, d / g
            lc = d.leading_coefficient()
            if lc != 1:
                inv = 1 / lc
                n, d = n * inv, d * inv
        self._n, self._d, self._pair = n, d, None
        return self

    @classmethod
    def _make(cls, n, d, reduce: bool = True) -> "RatFunX":
        out = cls.__new__(cls)
        return out._set(n, d, reduce)

    @classmethod
    def of(cls, value) -> "RatFunX":
        return value if isinstance(value, RatFunX) else cls(value)

    # -- views
    def _poly_pair(self):
        if self._pair is None:
            rows = _rows(self._d)
            lead = _dense(rows[max(rows)])
            self._pair = (_mpoly_over(self._n, lead), _mpoly_over(self._d, lead))
        return self._pair

    @property
    def num(self) -> Poly:
        return self._poly_pair()[0]

    @property
    def den(self) -> Poly:
        return self._poly_pair()[1]

    def x_degrees(self) -> tuple[int, int]:
        """Degrees in x of numerator and denominator (-1 for zero)."""
        dn = self._n.degrees()[0] if not self._n.is_zero() else -1
        return dn, self._d.degrees()[0]

    def is_poly(self) -> bool:
        return self._d.degrees()[0] == 0

    def as_poly(self) -> Poly:
        if not self.is_poly():
            raise ExactDivisionFailed("rational function has a non-constant denominator")
        return self.num

    def __bool__(self):
        return not self._n.is_zero()

    def __eq__(self, other):
        o = _as_rat(other)
        if o is NotImplemented:
            return NotImplemented
        return self._n == o._n and self._d == o._d

    def __hash__(self):
        return hash((str(self._n), str(self._d)))

    # -- field operations
    def __add__(self, other):
        o = _as_rat(other)
        if o is NotImplemented:
            return o
        if self._d == o._d:
            return RatFunX._make(self._n + o._n, self._d, not self._d.is_one())
        if o._d.is_one():
            return RatFunX._make(self._n + o._n * self._d, self._d, False)
        if self._d.is_one():
            return RatFunX._make(self._n * o._d + o._n, o._d, False)
        g = self._d.gcd(o._d)
        if g.is_one():
            return RatFunX._make(self._n * o._d + o._n * self._d, self._d * o._d)
        a, b = self._d / g, o._d / g
        return RatFunX._make(self._n * b + o._n * a, a * o._d)

    __radd__ = __add__

    def __neg__(self):
        return RatFunX._make(-self._n, self._d, False)

    def __sub__(self, other):
        o = _as_rat(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = _as_rat(other)
        if o is NotImplemented:
            return o
        if self._d.is_one() and o._d.is_one():
            return RatFunX._make(self._n * o._n, _M1, False)
        # cross-cancel before multiplying keeps the gcds small
        g1 = self._n.gcd(o._d) if not o._d.is_one() else _M1
        g2 = o._n.gcd(self._d) if not self._d.is_one() else _M1
        n1, d2 = (self._n / g1, o._d / g1) if not g1.is_one() else (self._n, o._d)
        n2, d1 = (o._n / g2, self._d / g2) if not g2.is_one() else (o._n, self._d)
        return RatFunX._make(n1 * n2, d1 * d2, False)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunX":
        if self._n.is_zero():
            raise DivisionByZero("inverse of the zero rational function")
        return RatFunX._make(self._d, self._n, False)

    def __truediv__(self, other):
        o = _as_rat(other)
        if o is NotImplemented:
            return o
        if not o:
            raise DivisionByZero("division by the zero rational function")
        return self * o.inverse()

    def __rtruediv__(self, other):
        return _as_rat(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunX._make(self._n**n, self._d**n, False)

    # -- evaluation and substitution
    def __call__(self, x0):
        if isinstance(x0, (int, Fraction)):
            v = _fq(Fraction(x0))
            n, d = self._n.subs({"x": v}), self._d.subs({"x": v})
            if d.is_zero():
                raise DivisionByZero(f"pole at x={x0}")
            return _zratio(n, d)
        num, den = self._poly_pair()
        dv = den(x0)
        if not dv:
            raise DivisionByZero(f"pole at x={x0}")
        return num(x0) / dv

    def dilate_by(self, s) -> "RatFunX":
        """``r(s x)`` for a rational ``s``."""
        sx = _MX * _fq(Fraction(s))
        return RatFunX._make(self._n.compose(sx, _MZ), self._d.compose(sx, _MZ), False)

    def __repr__(self):
        return f"RatFunX({self._n}, {self._d})"

    def __str__(self):
        num, den = self._poly_pair()
        if den.degree == 0:
            return poly_str(num.scale(1 / den.coeffs[0]) if den.coeffs[0] != 1 else num)
        return f"({poly_str(num)}) / ({poly_str(den)})"


def _zratio(n, d):
    """Quotient of two polynomials in Z only, as a scalar."""
    rn, rd = _rows(n) if not n.is_zero() else {}, _rows(d)
    num = _dense(rn.get(0, {0: _ZERO}))
    den = _dense(rd[0])
    if len(num) == 1 and len(den) == 1:
        return num[0] / den[0]
    return ZRat(num, den)


def _as_mpoly(value):
    if isinstance(value, Poly):
        return _poly_to_mpoly(value)
    if isinstance(value, RatFunX):
        return value._n, value._d
    if isinstance(value, (int, Fraction)):
        return _MCTX.from_dict({(0, 0): _fq(Fraction(value))}) if value else _M0, _M1
    if isinstance(value, ZRat):
        return _zpoly(value.num), _zpoly(value.den)
    if isinstance(value, RealScalar):
        raise BackendMismatch("rational functions need exact coefficients")
    raise TypeError(f"cannot build a rational function from {type(value).__name__}")


def _as_rat(value):
    if isinstance(value, RatFunX):
        return value
    try:
        n, d = _as_mpoly(value)
    except TypeError:
        return NotImplemented
    if isinstance(value, ZRat) or (d is not _M1 and not d.is_one()):
        return RatFunX._make(n, d)
    return RatFunX._make(n, _M1, False)


def ratfun_dilate(ctx, r: RatFunX, ell: int) -> RatFunX:
    return RatFunX.of(r).dilate_by(_qbase(ctx, ell))


def q_derivative_rat(ctx, r, ell: int = 1) -> RatFunX:
    """Quotient rule: (P(sx)Q(x) - P(x)Q(sx)) / ((s-1) x Q(x) Q(sx)), s = q^ell."""
    r = RatFunX.of(r)
    s = _fq(_qbase(ctx, ell))
    sx = _MX * s
    P, Q = r._n, r._d
    Ps = P.compose(sx, _MZ)
    if Q.degrees()[0] == 0:
        top, bottom = Ps - P, Q * _MX * (s - 1)
    else:
        Qs = Q.compose(sx, _MZ)
        top, bottom = Ps * Q - P * Qs, Q * Qs * _MX * (s - 1)
    return RatFunX._make(top, bottom)


def combine(terms: Sequence[tuple]) -> RatFunX:
    """Sum of ``coef * poly`` pairs as one reduced rational function."""
    total = RatFunX(0)
    for coef, p in terms:
        total = total + RatFunX.of(coef) * RatFunX.of(p)
    return total
