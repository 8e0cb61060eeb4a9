"""Coefficient fields.

Two interchangeable backends live here:

* :class:`ZRat` -- exact elements of Q(Z), rational functions in one formal
  transcendental ``Z`` over the rationals.  ``Z`` stands for the infinite
  product (q, a, q/a; q)_inf that appears in every norm of the Al-Salam--Carlitz
  I family, so keeping it formal makes all identities decidable.
* :class:`RealScalar` -- high-precision reals (mpmath, 60 digits) with ``Z``
  replaced by its numeric value.

Both accept ``int`` and :class:`~fractions.Fraction` operands.  Combining a
``ZRat`` with a ``RealScalar`` raises :class:`BackendMismatch`.

Polynomials in ``Z`` are stored as tuples of Fractions, constant term first.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from numbers import Rational as _RationalABC

import mpmath

from .errors import BackendMismatch, DivisionByZero, PoleAtZ

Rational = Fraction

DPS = 60
MP = mpmath.MPContext()
MP.dps = DPS

_ZERO = Fraction(0)
_ONE = Fraction(1)
_ONE_T = (_ONE,)


# -- dense univariate helpers over Q --------------------------------------


def _strip(a):
    n = len(a)
    while n and not a[n - 1]:
        n -= 1
    return tuple(a[:n])


def _add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _strip(out)


def _sub(a, b):
    out = list(a) + [_ZERO] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return _strip(out)


def _mul(a, b):
    if not a or not b:
        return ()
    if len(a) == 1:
        c = a[0]
        return tuple(c * y for y in b)
    if len(b) == 1:
        c = b[0]
        return tuple(c * y for y in a)
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for k, y in enumerate(b):
                out[i + k] += x * y
    return tuple(out)


def _scale(a, c):
    return tuple(c * y for y in a) if c else ()


def _divmod(a, b):
    """Quotient and remainder of a by nonzero b over Q."""
    db = len(b) - 1
    r = list(a)
    if len(r) <= db:
        return (), tuple(r)
    inv = 1 / b[-1]
    qt = [_ZERO] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if c:
            c *= inv
            qt[i - db] = c
            for k in range(db):
                r[i - db + k] -= c * b[k]
        r[i] = _ZERO
    return _strip(qt), _strip(r[:db])


def _monic(a):
    lc = a[-1]
    if lc == 1:
        return a
    inv = 1 / lc
    return tuple(c * inv for c in a)


def _primitive(a):
    # content-normalize: integer coefficients with gcd 1, positive leading term
    den = 1
    for c in a:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if ints[-1] < 0:
        g = -g
    return tuple(Fraction(v // g) for v in ints)


def poly_gcd(a, b):
    """Monic gcd of two polynomials over Q (Euclid on primitive parts)."""
    if not a:
        return _monic(b) if b else ()
    if not b:
        return _monic(a)
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        return _ONE_T
    a, b = _primitive(a), _primitive(b)
    while b:
        _, r = _divmod(a, b)
        if not r:
            break
        a, b = b, _primitive(r)
    return _monic(b)


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    return None


# -- exact backend ---------------------------------------------------------


class ZRat:
    """Reduced quotient ``num(Z)/den(Z)`` with ``den`` monic.

    Zero is ``num=()`` and ``den=(1,)``; canonical form makes ``==`` a
    componentwise comparison.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=(), den=_ONE_T, *, canonical=False):
        if canonical:
            self.num = num
            self.den = den
            return
        num = _strip([Fraction(c) for c in num])
        den = _strip([Fraction(c) for c in den])
        if not den:
            raise DivisionByZero("zero denominator")
        self.num, self.den = _reduce(num, den)

    # construction
    @classmethod
    def const(cls, c):
        c = Fraction(c)
        return cls((c,) if c else (), _ONE_T, canonical=True)

    @classmethod
    def gen(cls):
        """The formal generator ``Z``."""
        return cls((_ZERO, _ONE), _ONE_T, canonical=True)

    # predicates
    def __bool__(self):
        return bool(self.num)

    def is_constant(self):
        return len(self.den) == 1 and len(self.num) <= 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self!r} depends on Z")
        return self.num[0] if self.num else _ZERO

    @property
    def z_degree(self) -> tuple[int, int]:
        return (len(self.num) - 1, len(self.den) - 1)

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, ZRat):
            return other
        f = _as_fraction(other)
        if f is not None:
            return ZRat((f,) if f else (), _ONE_T, canonical=True)
        if isinstance(other, RealScalar) or isinstance(other, (float, MP.mpf)):
            raise BackendMismatch("cannot combine exact and approximate scalars")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            if len(self.den) == 1:
                return ZRat(_add(self.num, o.num), _ONE_T, canonical=True)
            return _make(_add(self.num, o.num), self.den)
        return _make(
            _add(_mul(self.num, o.den), _mul(o.num, self.den)),
            _mul(self.den, o.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return ZRat(tuple(-c for c in self.num), self.den, canonical=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.num or not o.num:
            return ZRat((), _ONE_T, canonical=True)
        if len(self.den) == 1 and len(o.den) == 1:
            return ZRat(_mul(self.num, o.num), _ONE_T, canonical=True)
        if len(self.num) == 1 and len(self.den) == 1:
            return ZRat(_scale(o.num, self.num[0]), o.den, canonical=True)
        if len(o.num) == 1 and len(o.den) == 1:
            return ZRat(_scale(self.num, o.num[0]), self.den, canonical=True)
        # cross-cancel so the product of coprime pairs is already reduced
        g1 = poly_gcd(self.num, o.den)
        g2 = poly_gcd(o.num, self.den)
        n1, d2 = _exq(self.num, g1), _exq(o.den, g1)
        n2, d1 = _exq(o.num, g2), _exq(self.den, g2)
        return _normalize_lc(_mul(n1, n2), _mul(d1, d2))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise DivisionByZero("inverse of zero in Q(Z)")
        return _normalize_lc(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ZRat.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # comparison / hashing
    def __eq__(self, other):
        if isinstance(other, ZRat):
            return self.num == other.num and self.den == other.den
        f = _as_fraction(other)
        if f is None:
            return NotImplemented
        if len(self.den) != 1:
            return False
        return (self.num[0] if self.num else _ZERO) == f

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self.num, self.den))

    # evaluation / text
    def eval_z(self, z):
        return scalar_eval_z(self, z)

    def __repr__(self):
        return to_text(self)

    def __str__(self):
        return pretty(self)


def _exq(a, g):
    if len(g) == 1:
        return a if g[0] == 1 else _scale(a, 1 / g[0])
    qt, r = _divmod(a, g)
    assert not r
    return qt


def _normalize_lc(num, den):
    lc = den[-1]
    if lc != 1:
        inv = 1 / lc
        num = tuple(c * inv for c in num)
        den = tuple(c * inv for c in den)
    return ZRat(num, den, canonical=True)


def _reduce(num, den):
    if not num:
        return (), _ONE_T
    if len(den) > 1:
        g = poly_gcd(num, den)
        if len(g) > 1:
            num, den = _exq(num, g), _exq(den, g)
    lc = den[-1]
    if lc != 1:
        inv = 1 / lc
        num = tuple(c * inv for c in num)
        den = tuple(c * inv for c in den)
    return num, den


def _make(num, den):
    num, den = _reduce(num, den)
    return ZRat(num, den, canonical=True)


# -- approximate backend ---------------------------------------------------


class RealScalar:
    """High-precision real (60 significant digits) wrapping an mpmath mpf."""

    __slots__ = ("v",)

    def __init__(self, value=0):
        if isinstance(value, ZRat):
            raise BackendMismatch("cannot build an approximate scalar from ZRat")
        if isinstance(value, RealScalar):
            value = value.v
        elif isinstance(value, Fraction):
            value = MP.mpf(value.numerator) / value.denominator
        self.v = MP.mpf(value)

    def _coerce(self, other):
        if isinstance(other, RealScalar):
            return other.v
        if isinstance(other, ZRat):
            raise BackendMismatch("cannot combine exact and approximate scalars")
        if isinstance(other, Fraction):
            return MP.mpf(other.numerator) / other.denominator
        if isinstance(other, (int, float)) or isinstance(other, MP.mpf):
            return MP.mpf(other)
        return NotImplemented

    def _wrap(self, v):
        out = RealScalar.__new__(RealScalar)
        out.v = v
        return out

    def __add__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self._wrap(self.v + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self._wrap(self.v - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self._wrap(o - self.v)

    def __mul__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self._wrap(self.v * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o:
            raise DivisionByZero("division by zero")
        return self._wrap(self.v / o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.v:
            raise DivisionByZero("division by zero")
        return self._wrap(o / self.v)

    def __pow__(self, n):
        return self._wrap(self.v**n)

    def __neg__(self):
        return self._wrap(-self.v)

    def __pos__(self):
        return self

    def __abs__(self):
        return self._wrap(abs(self.v))

    def __bool__(self):
        return bool(self.v)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except BackendMismatch:
            return False
        if o is NotImplemented:
            return o
        return self.v == o

    def __lt__(self, other):
        return self.v < self._coerce(other)

    def __hash__(self):
        return hash(self.v)

    def __float__(self):
        return float(self.v)

    def __repr__(self):
        return f"RealScalar({MP.nstr(self.v, 20)})"

    def __str__(self):
        return MP.nstr(self.v, 20)


# -- bridging, text -------------------------------------------------------


def scalar_eval_z(s, z_value):
    """Evaluate an exact scalar at a numeric value of ``Z`` (mpmath mpf)."""
    if isinstance(s, RealScalar):
        raise BackendMismatch("scalar_eval_z expects an exact scalar")
    if not isinstance(s, ZRat):
        f = _as_fraction(s)
        return MP.mpf(f.numerator) / f.denominator
    z = z_value.v if isinstance(z_value, RealScalar) else MP.mpf(z_value)
    d = _horner(s.den, z)
    if not d:
        raise PoleAtZ(f"denominator of {s!r} vanishes at Z={z}")
    return _horner(s.num, z) / d


def _horner(coeffs, z):
    acc = MP.mpf(0)
    for c in reversed(coeffs):
        acc = acc * z + MP.mpf(c.numerator) / c.denominator
    return acc


def to_text(s: ZRat) -> str:
    """``[c0, c1, ...] / [d0, d1, ...]`` with constant term first."""
    num = ", ".join(map(str, s.num)) or "0"
    return "[{}] / [{}]".format(num, ", ".join(map(str, s.den)))


_TEXT_RE = re.compile(r"^\s*\[(.*)\]\s*/\s*\[(.*)\]\s*$")


def from_text(text: str) -> ZRat:
    m = _TEXT_RE.match(text)
    if not m:
        raise ValueError(f"not an exact scalar: {text!r}")
    num = [parse_rational(t) for t in m.group(1).split(",") if t.strip()]
    den = [parse_rational(t) for t in m.group(2).split(",") if t.strip()]
    return ZRat(num, den)


_RAT_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"``; decimal and float notation is rejected."""
    if not _RAT_RE.match(text):
        raise ValueError(f"expected an exact rational 'p/q', got {text!r}")
    return Fraction(text.replace(" ", ""))


def _zpoly_str(coeffs) -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else ("Z" if k == 1 else f"Z^{k}")
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def pretty(s) -> str:
    if isinstance(s, RealScalar):
        return str(s)
    if not isinstance(s, ZRat):
        return str(s)
    num = _zpoly_str(s.num)
    if len(s.den) == 1:
        return num
    wrap = (lambda t: f"({t})" if (" " in t) else t)
    return f"{wrap(num)}/{wrap(_zpoly_str(s.den))}"
