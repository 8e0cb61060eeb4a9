"""q-calculus primitives.

The ``q_*`` functions return scalars of the context backend.  The short
Fraction-valued helpers (``qnum``, ``qfact``, ...) are what the polynomial
code uses internally; they never touch ``Z``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from .context import QContext, mpf_of
from .errors import IndexOutOfRange, ToleranceNotPositive
from .qpoly import Poly
from .scalar import MP, RealScalar, ZRat, scalar_eval_z


@lru_cache(maxsize=None)
def qnum(q: Fraction, m: int) -> Fraction:
    """[m]_q = (1 - q^m)/(1 - q) for every integer m."""
    return (1 - q**m) / (1 - q)


@lru_cache(maxsize=None)
def qfact(q: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    for i in range(1, n + 1):
        out *= qnum(q, i)
    return out


def qbinom(q: Fraction, n: int, k: int) -> Fraction:
    if not 0 <= k <= n:
        raise IndexOutOfRange(f"need 0 <= k <= n, got n={n}, k={k}")
    return qfact(q, n) / (qfact(q, k) * qfact(q, n - k))


def qpoch(c, q: Fraction, n: int):
    """(c; q)_n for any scalar-like c."""
    if n < 0:
        raise IndexOutOfRange("Pochhammer length must be non-negative")
    out = Fraction(1)
    qi = Fraction(1)
    for _ in range(n):
        out = out * (1 - c * qi)
        qi *= q
    return out


def qfalling(q: Fraction, n: int, k: int) -> Fraction:
    """q-falling factorial [n]_q^{(k)} = (q^-n; q)_k (q-1)^-k q^(kn - C(k,2))."""
    if not 0 <= k <= n:
        raise IndexOutOfRange(f"need 0 <= k <= n, got n={n}, k={k}")
    return qpoch(q ** (-n), q, k) / (q - 1) ** k * q ** (k * n - comb(k, 2))


# -- backend-valued API ---------------------------------------------------


def q_number(ctx: QContext, m: int):
    return ctx.const(qnum(ctx.q, m))


def q_factorial(ctx: QContext, n: int):
    if n < 0:
        raise IndexOutOfRange("factorial of a negative index")
    return ctx.const(qfact(ctx.q, n))


def q_binomial(ctx: QContext, n: int, k: int):
    return ctx.const(qbinom(ctx.q, n, k))


def q_pochhammer(ctx: QContext, c, n: int):
    if isinstance(c, (int, Fraction)):
        return ctx.const(qpoch(Fraction(c), ctx.q, n))
    return ctx.one * qpoch(c, ctx.q, n)


def q_falling_factorial(ctx: QContext, n: int, k: int):
    return ctx.const(qfalling(ctx.q, n, k))


def q_pochhammer_inf(ctx: QContext, c, tol):
    """(c; q)_inf truncated with an explicit geometric tail bound.

    With eps = |c| q^N / (1 - q) the neglected factors change the product by
    a relative amount below 2 eps once |c| q^N <= 1/2; we stop when
    2 eps < tol.  Returns an mpmath mpf.
    """
    if not tol > 0:
        raise ToleranceNotPositive(f"tolerance must be positive, got {tol!r}")
    q = mpf_of(ctx.q)
    c = mpf_of(c)
    out = MP.mpf(1)
    term = abs(c)
    ci = c
    while True:
        if term <= 0.5 and 2 * term / (1 - q) < tol:
            return out
        out *= 1 - ci
        ci *= q
        term *= q


def boxminus_pow(ctx: QContext, y, n: int) -> Poly:
    """(x [-]_q y)^n = prod_{i<n} (x - y q^i), a monic polynomial in x."""
    if n < 0:
        raise IndexOutOfRange("power must be non-negative")
    out = Poly.const(1)
    qi = Fraction(1)
    for _ in range(n):
        out = out * Poly((-(y * qi), 1))
        qi *= ctx.q
    return out


def boxminus_pow_expanded(ctx: QContext, y, n: int) -> Poly:
    """Same polynomial via sum_k [n k]_q q^C(k,2) (-y)^k x^(n-k)."""
    q = ctx.q
    coeffs = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        coeffs[n - k] = qbinom(q, n, k) * q ** comb(k, 2) * (-y) ** k
    return Poly(coeffs)


# -- numeric Jackson integral oracle -------------------------------------


def _coeffs_mpf(ctx: QContext, f: Poly):
    out = []
    for c in f.coeffs:
        if isinstance(c, ZRat):
            out.append(scalar_eval_z(c, ctx.z_numeric))
        else:
            out.append(mpf_of(c))
    return out


def jackson_integral_numeric(ctx: QContext, f: Poly, tol=1e-30):
    """Integral of ``f`` over [a, 1] against (qx, qx/a; q)_inf d_q x.

    Sums the two Jackson lattices x = q^k and x = a q^k; exact coefficients
    containing ``Z`` are evaluated at its numeric value.  The tail after K
    terms is bounded by q^K (M1 W1 + |a| M2 W2) with M1, M2 bounds on |f| on
    the two lattices and W1 = (q/a; q)_inf, W2 = (aq; q)_inf bounds on the
    weights (a < 0 makes both products decrease along the lattice).
    """
    if not tol > 0:
        raise ToleranceNotPositive(f"tolerance must be positive, got {tol!r}")
    q = mpf_of(ctx.q)
    a = mpf_of(ctx.a)
    cs = _coeffs_mpf(ctx, f)
    if not cs:
        return MP.mpf(0)
    ptol = min(tol, MP.mpf(10) ** (-50))
    qq = q_pochhammer_inf(ctx, ctx.q, ptol)
    big1 = q_pochhammer_inf(ctx, ctx.q / ctx.a, ptol)
    big2 = q_pochhammer_inf(ctx, ctx.a * ctx.q, ptol)
    w1, w2 = qq * big1, qq * big2
    m1 = sum(abs(c) for c in cs)
    m2 = sum(abs(c) * abs(a) ** i for i, c in enumerate(cs))
    # the weights never exceed their k = 0 factor without (q;q)_inf
    bound = m1 * big1 + abs(a) * m2 * big2

    def ev(x):
        acc = MP.mpf(0)
        for c in reversed(cs):
            acc = acc * x + c
        return acc

    total = MP.mpf(0)
    qk = MP.mpf(1)
    # weights at the k-th nodes: w1 / ((q;q)_k (q/a;q)_k), w2 / ((aq;q)_k (q;q)_k)
    d1 = MP.mpf(1)
    d2 = MP.mpf(1)
    k = 0
    while qk * bound >= tol:
        total += (1 - q) * qk * (ev(qk) * w1 / d1 - a * ev(a * qk) * w2 / d2)
        k += 1
        d1 *= (1 - q**k) * (1 - q**k / a)
        d2 *= (1 - a * q**k) * (1 - q**k)
        qk *= q
    return total


def jackson_integral_mass_points(ctx: QContext, f: Poly, tol=1e-30):
    """Same integral from the jump masses of the orthogonality measure.

    The jumps q^k/((aq;q)_inf (q,q/a;q)_k) at q^k and
    -a q^k/((q/a;q)_inf (q,aq;q)_k) at a q^k carry a different normalisation:
    the result equals ``jackson_integral_numeric`` divided by
    (1 - q)(q, aq, q/a; q)_inf.
    """
    if not tol > 0:
        raise ToleranceNotPositive(f"tolerance must be positive, got {tol!r}")
    q = mpf_of(ctx.q)
    a = mpf_of(ctx.a)
    cs = _coeffs_mpf(ctx, f)
    ptol = min(tol, MP.mpf(10) ** (-50))
    aq_inf = q_pochhammer_inf(ctx, ctx.a * ctx.q, ptol)
    qa_inf = q_pochhammer_inf(ctx, ctx.q / ctx.a, ptol)
    m1 = sum(abs(c) for c in cs)
    m2 = sum(abs(c) * abs(a) ** i for i, c in enumerate(cs))
    qq = q_pochhammer_inf(ctx, ctx.q, ptol)
    bound = (m1 / aq_inf + abs(a) * m2 / qa_inf) / qq

    def ev(x):
        acc = MP.mpf(0)
        for c in reversed(cs):
            acc = acc * x + c
        return acc

    total = MP.mpf(0)
    qk = MP.mpf(1)
    d1 = MP.mpf(1)
    d2 = MP.mpf(1)
    k = 0
    # (q;q)_k >= (q;q)_inf while (q/a;q)_k, (aq;q)_k >= 1
    while qk * bound / (1 - q) >= tol:
        total += qk * ev(qk) / (aq_inf * d1) - a * qk * ev(a * qk) / (qa_inf * d2)
        k += 1
        d1 *= (1 - q**k) * (1 - q**k / a)
        d2 *= (1 - q**k) * (1 - a * q**k)
        qk *= q
    return total


def as_real(ctx: QContext, value) -> RealScalar:
    """Numeric value of any scalar, with ``Z`` evaluated numerically."""
    if isinstance(value, RealScalar):
        return value
    if isinstance(value, ZRat):
        return RealScalar(scalar_eval_z(value, ctx.z_numeric))
    return RealScalar(mpf_of(value))
