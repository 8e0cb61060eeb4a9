"""Sobolev-type polynomials with j-th q-derivative masses at x = a and x = 1.

The inner product is

    <f, g> = int_a^1 f g (qx, qx/a; q)_inf d_q x
             + lam (D^j f)(a) (D^j g)(a) + mu (D^j f)(1) (D^j g)(1),

and its integral part is evaluated exactly by expanding in the U_k basis, so
everything stays in Q(Z).  Three constructions of the monic orthogonal
family are provided: the kernel form, the connection form and plain
Gram--Schmidt.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .asc import ASCFamily
from .context import QContext
from .errors import (
    DegenerateConnection,
    DivisionByZero,
    ExactDivisionFailed,
    IndexOutOfRange,
    SingularGram,
    UndefinedAuxiliary,
)
from .qcore import qnum, qpoch
from .qpoly import Poly, RatFunX, q_derivative_iter


@dataclass(frozen=True)
class GramSystem:
    A: tuple  # ((a11, a12), (a21, a22))
    b: tuple
    deltas: tuple

    @property
    def det(self):
        (a11, a12), (a21, a22) = self.A
        return a11 * a22 - a12 * a21


@dataclass(frozen=True)
class ConnectionCoeffs:
    C1: RatFunX
    D1: RatFunX
    C2: RatFunX
    D2: RatFunX
    Bn_det: RatFunX


@dataclass(frozen=True)
class HypergeomAux:
    psi_n: object
    vartheta_n: object


class SobolevFamily:
    """Cached Sobolev-type polynomials over one context.

    Caches are filled under a lock and only ever appended to.
    """

    def __init__(self, ctx: QContext, asc: ASCFamily | None = None):
        self.ctx = ctx
        self.asc = asc if asc is not None else ASCFamily(ctx)
        self._lock = threading.RLock()
        self._polys: dict[int, Poly] = {}
        self._gs: list[Poly] = []
        self._gram: dict[int, GramSystem] = {}
        self._conn: dict[int, ConnectionCoeffs] = {}
        self._first: dict[int, tuple[RatFunX, RatFunX]] = {}

    def poly(self, n: int) -> Poly:
        return sobolev_poly(self, n)

    def norm(self, n: int):
        p = self.poly(n)
        return inner_product(self, p, p)


# -- inner product --------------------------------------------------------


def expand_in_asc(fam, p: Poly) -> list:
    """Coefficients c_k with p = sum_k c_k U_k (by peeling off leading terms)."""
    asc = fam.asc if isinstance(fam, SobolevFamily) else fam
    rem = p
    out = [Fraction(0)] * (p.degree + 1)
    for k in range(p.degree, -1, -1):
        c = rem[k]
        if c:
            out[k] = c
            rem = rem - asc.poly(k).scale(c)
    if rem:
        raise ExactDivisionFailed("expansion left a nonzero remainder")
    return out


def integral_part(fam, f: Poly, g: Poly):
    """Exact int_a^1 f g dalpha as a scalar of the context backend."""
    asc = fam.asc if isinstance(fam, SobolevFamily) else fam
    cf, cg = expand_in_asc(asc, f), expand_in_asc(asc, g)
    total = Fraction(0)
    for k in range(min(len(cf), len(cg))):
        if cf[k] and cg[k]:
            total = total + cf[k] * cg[k] * asc.reduced_norm(k)
    return asc.ctx.Z * total


def inner_product(fam: SobolevFamily, f: Poly, g: Poly):
    ctx = fam.ctx
    out = integral_part(fam, f, g)
    df = q_derivative_iter(ctx, f, 1, ctx.j)
    dg = q_derivative_iter(ctx, g, 1, ctx.j)
    if df and dg:
        if ctx.lam:
            out = out + ctx.lam * df(ctx.a) * dg(ctx.a)
        if ctx.mu:
            out = out + ctx.mu * df(1) * dg(1)
    return out


# -- kernel construction --------------------------------------------------


def gram_system(fam: SobolevFamily, n: int) -> GramSystem:
    """The 2x2 system for X = (D^j UU_n(a), D^j UU_n(1)), solved by Cramer's rule."""
    if n < 1:
        raise IndexOutOfRange("the Gram system is defined for n >= 1")
    hit = fam._gram.get(n)
    if hit is not None:
        return hit
    ctx, asc = fam.ctx, fam.asc
    a, j, lam, mu = ctx.a, ctx.j, ctx.lam, ctx.mu
    one = Fraction(1)

    def kjj(x0, y0):
        return asc.kernel_eval_xy(n - 1, j, j, x0, y0)

    a11 = 1 + lam * kjj(a, a)
    a12 = mu * kjj(a, one)
    a21 = lam * kjj(one, a)
    a22 = 1 + mu * kjj(one, one)
    dj = asc.derivative(n, j)
    b1, b2 = ctx.one * dj(a), ctx.one * dj(one)
    det = a11 * a22 - a12 * a21
    if not det:
        raise SingularGram(f"det(A) vanishes at n={n}")
    d1 = (b1 * a22 - a12 * b2) / det
    d2 = (a11 * b2 - a21 * b1) / det
    sysm = GramSystem(((a11, a12), (a21, a22)), (b1, b2), (d1, d2))
    fam._gram[n] = sysm
    return sysm


def sobolev_poly(fam: SobolevFamily, n: int) -> Poly:
    """UU_n = U_n - lam K^{(0,j)}_{n-1}(x, a) D1 - mu K^{(0,j)}_{n-1}(x, 1) D2."""
    if n < 0:
        raise IndexOutOfRange("degree must be non-negative")
    hit = fam._polys.get(n)
    if hit is not None:
        return hit
    ctx, asc = fam.ctx, fam.asc
    out = asc.poly(n).scale(ctx.one)
    if n >= 1 and (ctx.lam or ctx.mu):
        d1, d2 = gram_system(fam, n).deltas
        if ctx.lam and d1:
            out = out - asc.kernel_eval_y(n - 1, ctx.j, ctx.a).scale(ctx.lam * d1)
        if ctx.mu and d2:
            out = out - asc.kernel_eval_y(n - 1, ctx.j, Fraction(1)).scale(ctx.mu * d2)
    with fam._lock:
        fam._polys.setdefault(n, out)
    return fam._polys[n]


def sobolev_poly_gs(fam: SobolevFamily, n: int) -> Poly:
    """Monic Gram--Schmidt of 1, x, ..., x^n under the Sobolev product."""
    if n < 0:
        raise IndexOutOfRange("degree must be non-negative")
    ctx = fam.ctx
    with fam._lock:
        gs = fam._gs
        while len(gs) <= n:
            m = len(gs)
            p = Poly.monomial(m, ctx.one)
            for k, e in enumerate(gs):
                nk = inner_product(fam, e, e)
                if not nk:
                    raise SingularGram(f"vanishing Sobolev norm at degree {k}")
                c = inner_product(fam, p, e) / nk
                if c:
                    p = p - e.scale(c)
            gs.append(p)
    return fam._gs[n]


def fourier_coeffs(fam: SobolevFamily, n: int) -> list:
    """a_{n,k}, k < n, in UU_n = U_n + sum_k a_{n,k} U_k.

    a_{n,k} = -(lam D^j UU_n(a) D^j U_k(a) + mu D^j UU_n(1) D^j U_k(1)) / ||U_k||^2.
    """
    ctx, asc = fam.ctx, fam.asc
    if n == 0:
        return []
    d1, d2 = gram_system(fam, n).deltas if (ctx.lam or ctx.mu) else (ctx.zero, ctx.zero)
    out = []
    for k in range(n):
        dk = asc.derivative(k, ctx.j)
        top = ctx.lam * d1 * dk(ctx.a) + ctx.mu * d2 * dk(1)
        out.append(-top / asc.norm(k))
    return out


# -- connection formulas --------------------------------------------------


def first_connection(fam: SobolevFamily, n: int) -> tuple[RatFunX, RatFunX]:
    """(C_{1,n}, D_{1,n}) with UU_n = C_{1,n} U_n + D_{1,n} U_{n-1}."""
    hit = fam._first.get(n)
    if hit is not None:
        return hit
    ctx, asc = fam.ctx, fam.asc
    one = RatFunX.of(ctx.one)
    zero = RatFunX.of(ctx.zero)
    if n == 0:
        out = (one, zero)
    elif not (ctx.lam or ctx.mu):
        out = (one, zero)
    else:
        d1, d2 = gram_system(fam, n).deltas
        c1, dd1 = one, zero
        for weight, delta, y0 in ((ctx.lam, d1, ctx.a), (ctx.mu, d2, Fraction(1))):
            if weight and delta:
                A, B = asc.kernel_ab_coeffs(n, y0)
                c1 = c1 - A * (weight * delta)
                dd1 = dd1 - B * (weight * delta)
        out = (c1, dd1)
    fam._first[n] = out
    return out


def connection_coeffs(fam: SobolevFamily, n: int) -> ConnectionCoeffs:
    if n < 1:
        raise IndexOutOfRange("connection coefficients need n >= 1")
    hit = fam._conn.get(n)
    if hit is not None:
        return hit
    asc = fam.asc
    c1, d1 = first_connection(fam, n)
    if n == 1:
        # UU_0 = U_0; the general formula would read 0/gamma_0 with gamma_0 = 0
        c2 = RatFunX.of(fam.ctx.zero)
        d2 = RatFunX.of(fam.ctx.one)
    else:
        pc1, pd1 = first_connection(fam, n - 1)
        g = asc.gamma(n - 1)
        c2 = pd1 * (-1 / g)
        d2 = pc1 + c2 * Poly((asc.beta(n - 1), -1))
    det = c1 * d2 - c2 * d1
    out = ConnectionCoeffs(c1, d1, c2, d2, det)
    fam._conn[n] = out
    return out


def connection_residuals(fam: SobolevFamily, n: int) -> tuple[RatFunX, RatFunX]:
    """Residuals of UU_n = C1 U_n + D1 U_{n-1} and UU_{n-1} = C2 U_n + D2 U_{n-1}."""
    cc = connection_coeffs(fam, n)
    u, um = fam.asc.poly(n), fam.asc.poly(n - 1)
    r1 = cc.C1 * u + cc.D1 * um - sobolev_poly(fam, n)
    r2 = cc.C2 * u + cc.D2 * um - sobolev_poly(fam, n - 1)
    return r1, r2


def inverse_connection(fam: SobolevFamily, n: int) -> tuple[Poly, Poly]:
    """(U_n, U_{n-1}) recovered from (UU_n, UU_{n-1}) through det(B_n)."""
    cc = connection_coeffs(fam, n)
    if not cc.Bn_det:
        raise DegenerateConnection(f"det(B_n) vanishes identically at n={n}")
    s, sm = sobolev_poly(fam, n), sobolev_poly(fam, n - 1)
    un = (cc.D2 * s - cc.D1 * sm) / cc.Bn_det
    um = (cc.C1 * sm - cc.C2 * s) / cc.Bn_det
    if not (un.is_poly() and um.is_poly()):
        raise ExactDivisionFailed(f"inverse connection is not polynomial at n={n}")
    return un.as_poly(), um.as_poly()


# -- 3phi2 representation -------------------------------------------------


def hypergeom_aux(fam: SobolevFamily, n: int, x0) -> HypergeomAux:
    ctx = fam.ctx
    q, a = ctx.q, ctx.a
    c1, d1 = first_connection(fam, n)
    try:
        c1v, d1v = c1(x0), d1(x0)
    except DivisionByZero as exc:
        raise UndefinedAuxiliary(f"connection coefficient has a pole at x={x0}") from exc
    if not d1v:
        raise UndefinedAuxiliary(f"D_(1,n) vanishes at x={x0}")
    theta = a * q ** (n - 2) * qnum(q, n) * c1v / d1v - qnum(q, n - 1)
    den = (1 - q) * theta + 1
    if not den:
        raise UndefinedAuxiliary(f"psi_n has a pole at x={x0}")
    return HypergeomAux(1 / den, theta)


def hypergeom_eval(fam: SobolevFamily, n: int, x0):
    """Prefactor times the terminating 3phi2(q^-n, 1/x, psi; 0, psi/q; q, qx/a) at x0."""
    ctx = fam.ctx
    q, a = ctx.q, ctx.a
    if n < 1:
        raise IndexOutOfRange("the 3phi2 form is stated for n >= 1")
    if not x0:
        raise UndefinedAuxiliary("x = 0 is excluded")
    aux = hypergeom_aux(fam, n, x0)
    psi = aux.psi_n
    if not psi:
        raise UndefinedAuxiliary(f"psi_n vanishes at x={x0}")
    d1v = first_connection(fam, n)[1](x0)
    z = q * x0 / a
    total = ctx.zero
    for k in range(n + 1):
        low = qpoch(psi / q, q, k)
        if not low:
            raise UndefinedAuxiliary(f"(psi/q; q)_{k} vanishes at x={x0}")
        top = qpoch(q ** (-n), q, k) * qpoch(1 / Fraction(x0), q, k) * qpoch(psi, q, k)
        total = total + top / (low * qpoch(q, q, k)) * z**k
    pre = -((-a) ** (n - 1)) * d1v * (1 - psi / q) * q ** (comb(n, 2) - n + 2)
    pre = pre / (qnum(q, n) * psi * (1 - q))
    return pre * total


# -- closed forms for UU_3(x; q, 2) ---------------------------------------


def reference_low_degree(ctx: QContext) -> dict[int, Poly]:
    """Closed forms of the lambda, mu-free members: UU_0..UU_2 for j = 2 and
    UU_0..UU_3 for j = 3."""
    q, a = ctx.q, ctx.a
    out = {
        0: Poly.const(1),
        1: Poly((-a - 1, 1)),
        2: Poly((a**2 * q + a * q + a + q, -a * q - a - q - 1, 1)),
    }
    if ctx.j == 3:
        c2 = -a * q**2 - a * q - q**2 - a - q - 1
        c1 = a**2 * q**3 + a**2 * q**2 + a * q**3 + a**2 * q + 2 * a * q**2 + q**3 + 2 * a * q + q**2 + a + q
        c0 = -(a**3 * q**3) - a**2 * q**3 - a**2 * q**2 - a * q**3 - a**2 * q - a * q**2 - q**3 - a * q
        out[3] = Poly((c0, c1, c2, 1))
    elif ctx.j != 2:
        raise ValueError("closed forms are tabulated for j = 2 and j = 3 only")
    return out


def reference_u3_j2(ctx: QContext) -> dict:
    """Reference closed forms a_2, a_1, a_0 of UU_3(x; q, 2), term by term.

    a_1 uses a different denominator from a_2 and a_0 (a^2 where the others
    have a^2 q).  These are compared against the computed polynomial, never
    trusted.
    """
    q, a, lam, mu = ctx.q, ctx.a, ctx.lam, ctx.mu
    Z = ctx.Z
    P = (1 - q) * (1 - q**2)
    ZP = Z * P
    den = ZP * a**2 * q**2 - ZP * a**2 * q - lam * q**2 - mu * q**2 - 2 * lam * q - 2 * mu * q - lam - mu
    den1 = ZP * a**2 * q**2 - ZP * a**2 - lam * q**2 - mu * q**2 - 2 * lam * q - 2 * mu * q - lam - mu
    n2 = (
        ZP * a**3 * q**4 + ZP * a**2 * q**4 - ZP * a**3 * q - a * lam * q**4
        - ZP * a**2 * q - 3 * a * lam * q**3 - mu * q**4 - 4 * a * lam * q**2
        - 3 * mu * q**3 - 3 * a * lam * q - 4 * mu * q**2 - a * lam - 3 * mu * q - mu
    )
    n1 = (
        ZP * a**4 * q**5 + ZP * a**3 * q**5 + ZP * a**3 * q**4 + ZP * a**2 * q**5
        - ZP * a**4 * q**2 - a**2 * lam * q**5
        - ZP * a**3 * q**2 - 3 * a**2 * lam * q**4 + a**2 * mu * q**4 - ZP * a**3 * q
        - ZP * a**2 * q**2 - 4 * a**2 * lam * q**3 + 3 * a**2 * mu * q**3 - mu * q**5
        - 3 * a**2 * lam * q**2 + 4 * a**2 * mu * q**2 + lam * q**4 - 3 * mu * q**4
        - a**2 * lam * q + 3 * a**2 * mu * q + 3 * lam * q**3 - 4 * mu * q**3
        + a**2 * mu + 4 * lam * q**2
        - 3 * mu * q**2 + 3 * lam * q - mu * q + lam
    )
    n0 = (
        ZP * a**5 * q**5 - ZP * a**5 * q**4 + ZP * a**4 * q**5 + ZP * a**3 * q**5
        + ZP * a**2 * q**5 - a**3 * lam * q**5
        - ZP * a**4 * q**2 - ZP * a**2 * q**4 - 2 * a**3 * lam * q**4 + a**3 * mu * q**4
        - ZP * a**3 * q**2 - a**3 * lam * q**3 + 3 * a**3 * mu * q**3
        + a**2 * mu * q**4 + 3 * a**3 * mu * q**2 + 3 * a**2 * mu * q**3 + a * lam * q**4
        - mu * q**5 + a**3 * mu * q + 4 * a**2 * mu * q**2 + 3 * a * lam * q**3 + lam * q**4
        - 2 * mu * q**4 + 3 * a**2 * mu * q + 4 * a * lam * q**2 + 3 * lam * q**3
        - mu * q**3 + a**2 * mu + 3 * a * lam * q + 3 * lam * q**2 + a * lam + lam * q
    )
    return {"a2": -n2 / den, "a1": n1 / den1, "a0": -n0 / den}


def compare_reference_u3_j2(fam: SobolevFamily) -> list[dict]:
    """Per-coefficient comparison of the closed forms with the Gram--Schmidt oracle."""
    ctx = fam.ctx
    if ctx.j != 2:
        raise ValueError("the closed forms are for j = 2")
    oracle = sobolev_poly_gs(fam, 3)
    ref = reference_u3_j2(ctx)
    out = []
    for k in (2, 1, 0):
        name = f"a{k}"
        got = oracle[k]
        claimed = ref[name]
        out.append({"coefficient": name, "computed": got, "closed_form": claimed, "agree": got == claimed})
    return out
