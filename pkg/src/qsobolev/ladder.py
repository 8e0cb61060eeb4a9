"""Structure relations, ladder operators, the rational three-term recurrence
and the second-order holonomic q-difference equations of UU_n.

Every coefficient is assembled as a reduced rational function in x over
Q(Z) and each relation is returned as a residual that must vanish.  The
derivative base is q^ell with ell in {-1, 1}; index pairs (k1, k2) are
(1, 2) for ell = -1 and (3, 4) for ell = 1.

The ``fault`` keyword perturbs one named coefficient by +1.  It exists so
that the verification driver can prove it notices a wrong formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateConnection, DegenerateTTRR, DegenerateXi, IndexOutOfRange
from .qcore import qnum
from .qpoly import Poly, RatFunX, q_derivative_rat
from .sobolev import SobolevFamily, connection_coeffs, first_connection

FAULT_TARGETS = (
    "E1", "E2", "E3", "E4", "F1", "F2", "F3", "F4",
    "Theta", "Xi1", "Xi2", "alpha", "beta", "gamma", "R", "S", "T",
)


@dataclass(frozen=True)
class LemmaCoeffs:
    E: dict
    F: dict
    sigma_ell: Poly


@dataclass(frozen=True)
class XiTheta:
    theta: RatFunX
    xi: dict  # (i, k) -> RatFunX


@dataclass(frozen=True)
class TTRRCoeffs:
    alpha: RatFunX
    beta: RatFunX
    gamma: RatFunX


@dataclass(frozen=True)
class HolonomicCoeffs:
    R: RatFunX
    S: RatFunX
    T: RatFunX
    Rbar: RatFunX
    Sbar: RatFunX
    Tbar: RatFunX


def _check_ell(ell: int) -> None:
    if ell not in (-1, 1):
        raise ValueError(f"ell must be -1 or 1, got {ell!r}")


def k_indices(ell: int) -> tuple[int, int]:
    _check_ell(ell)
    return (3, 4) if ell == 1 else (1, 2)


def _tamper(name: str, value: RatFunX, fault: str | None) -> RatFunX:
    return value + 1 if fault == name else value


def _rat(p) -> RatFunX:
    return RatFunX.of(p)


def _sbase(fam: SobolevFamily, ell: int) -> Fraction:
    return fam.ctx.q if ell == 1 else 1 / fam.ctx.q


def _D(fam: SobolevFamily, f, ell: int) -> RatFunX:
    return q_derivative_rat(fam.ctx, _rat(f), ell)


def _dilate(fam: SobolevFamily, f, ell: int) -> RatFunX:
    return _rat(f).dilate_by(_sbase(fam, ell))


def sigma_ell(fam: SobolevFamily, ell: int) -> Poly:
    _check_ell(ell)
    return fam.asc.sigma() if ell == -1 else Poly.const(1)


# -- Lemma coefficients ---------------------------------------------------


def _first_pair(fam: SobolevFamily, n: int, ell: int) -> tuple[RatFunX, RatFunX]:
    """(E_{k1,n}, F_{k1,n}): sigma_ell D_{q^ell} UU_n in the basis U_n, U_{n-1}."""
    key = ("EF1", n, ell)
    cache = fam.__dict__.setdefault("_ladder", {})
    hit = cache.get(key)
    if hit is not None:
        return hit
    asc, q = fam.asc, fam.ctx.q
    c1, d1 = first_connection(fam, n)
    if ell == -1:
        sig = asc.sigma()
        c1s, d1s = _dilate(fam, c1, -1), _dilate(fam, d1, -1)
        ab, bb, gb = asc.alpha_bar(n), asc.beta_bar(n), asc.gamma_bar(n)
        b, g = asc.beta(n), asc.gamma(n)
        # U_{n-2} only appears for n >= 2; at n = 1 the ratio gbar_0/gamma_0 is absent
        ratio = asc.gamma_bar(n - 1) / asc.gamma(n - 1) if n >= 2 else Fraction(0)
        bm = asc.beta(n - 1)
        E = (
            c1s * Poly((bb - ab * b, ab))
            + _D(fam, c1, -1) * sig
            + d1s * (asc.alpha_bar(n - 1) - ratio)
        )
        F = (
            c1s * (gb - ab * g)
            + _D(fam, d1, -1) * sig
            + d1s * Poly((asc.beta_bar(n - 1) - ratio * bm, ratio))
        )
    else:
        c1q, d1q = _dilate(fam, c1, 1), _dilate(fam, d1, 1)
        r = qnum(q, n - 1) / asc.gamma(n - 1) if n >= 2 else Fraction(0)
        bm = asc.beta(n - 1)
        E = _D(fam, c1, 1) - d1q * r
        F = c1q * qnum(q, n) + d1q * Poly((-r * bm, r)) + _D(fam, d1, 1)
    cache[key] = (E, F)
    return E, F


def lemma_coeffs(fam: SobolevFamily, n: int, ell: int, fault: str | None = None) -> LemmaCoeffs:
    if n < 1:
        raise IndexOutOfRange("the lemma needs n >= 1")
    k1, k2 = k_indices(ell)
    E1, F1 = _first_pair(fam, n, ell)
    if n == 1:
        # UU_0 = 1 has zero derivative
        E2 = F2 = RatFunX.of(Fraction(0))
    else:
        pe, pf = _first_pair(fam, n - 1, ell)
        g = fam.asc.gamma(n - 1)
        E2 = pf * (-1 / g)
        F2 = pe + E2 * Poly((fam.asc.beta(n - 1), -1))
    E = {k1: _tamper(f"E{k1}", E1, fault), k2: _tamper(f"E{k2}", E2, fault)}
    F = {k1: _tamper(f"F{k1}", F1, fault), k2: _tamper(f"F{k2}", F2, fault)}
    return LemmaCoeffs(E, F, sigma_ell(fam, ell))


def lemma_residuals(fam: SobolevFamily, n: int, ell: int, fault: str | None = None):
    """sigma_ell D UU_n - E U_n - F U_{n-1}, and the same for UU_{n-1}."""
    k1, k2 = k_indices(ell)
    lc = lemma_coeffs(fam, n, ell, fault)
    u, um = fam.asc.poly(n), fam.asc.poly(n - 1)
    out = []
    for k, s in ((k1, fam.poly(n)), (k2, fam.poly(n - 1))):
        lhs = _D(fam, s, ell) * lc.sigma_ell
        out.append(lhs - lc.E[k] * u - lc.F[k] * um)
    return tuple(out)


# -- Theta and Xi ---------------------------------------------------------


def xi_theta(fam: SobolevFamily, n: int, ell: int, fault: str | None = None) -> XiTheta:
    key = ("XT", n, ell)
    cache = fam.__dict__.setdefault("_ladder", {})
    if fault is None and key in cache:
        return cache[key]
    cc = connection_coeffs(fam, n)
    if not cc.Bn_det:
        raise DegenerateConnection(f"det(B_n) vanishes identically at n={n}")
    lc = lemma_coeffs(fam, n, ell, fault)
    theta = _tamper("Theta", cc.Bn_det * lc.sigma_ell, fault)
    xi = {}
    for k in lc.E:
        E, F = lc.E[k], lc.F[k]
        xi[(1, k)] = _tamper("Xi1", F * cc.C1 - E * cc.D1, fault)
        xi[(2, k)] = _tamper("Xi2", E * cc.D2 - F * cc.C2, fault)
    out = XiTheta(theta, xi)
    if fault is None:
        cache[key] = out
    return out


def structure_residuals(fam: SobolevFamily, n: int, ell: int, fault: str | None = None):
    """Residuals of Theta D UU_n = Xi_{2,k1} UU_n + Xi_{1,k1} UU_{n-1} and its k2 partner."""
    k1, k2 = k_indices(ell)
    xt = xi_theta(fam, n, ell, fault)
    s, sm = fam.poly(n), fam.poly(n - 1)
    r1 = xt.theta * _D(fam, s, ell) - xt.xi[(2, k1)] * s - xt.xi[(1, k1)] * sm
    r2 = xt.theta * _D(fam, sm, ell) - xt.xi[(2, k2)] * s - xt.xi[(1, k2)] * sm
    return r1, r2


def annihilation(fam: SobolevFamily, n: int, ell: int, f, fault: str | None = None) -> RatFunX:
    """a_ell f = Theta D_{q^ell} f - Xi_{2,k1} f."""
    k1, _ = k_indices(ell)
    xt = xi_theta(fam, n, ell, fault)
    return xt.theta * _D(fam, f, ell) - xt.xi[(2, k1)] * _rat(f)


def creation(fam: SobolevFamily, n: int, ell: int, f, fault: str | None = None) -> RatFunX:
    """a_ell^dagger f = Theta D_{q^ell} f - Xi_{1,k2} f."""
    _, k2 = k_indices(ell)
    xt = xi_theta(fam, n, ell, fault)
    return xt.theta * _D(fam, f, ell) - xt.xi[(1, k2)] * _rat(f)


def ladder_apply(fam: SobolevFamily, n: int, ell: int, which: str, fault: str | None = None) -> RatFunX:
    """Residual of a_ell UU_n = Xi_{1,k1} UU_{n-1} ("annihilate") or
    a_ell^dagger UU_{n-1} = Xi_{2,k2} UU_n ("create")."""
    k1, k2 = k_indices(ell)
    xt = xi_theta(fam, n, ell, fault)
    s, sm = fam.poly(n), fam.poly(n - 1)
    if which == "annihilate":
        return annihilation(fam, n, ell, s, fault) - xt.xi[(1, k1)] * sm
    if which == "create":
        return creation(fam, n, ell, sm, fault) - xt.xi[(2, k2)] * s
    raise ValueError(f"which must be 'annihilate' or 'create', got {which!r}")


def composition_residual(fam: SobolevFamily, n: int, ell: int) -> RatFunX:
    """a^dagger(a UU_n) - a^dagger(Xi_{1,k1} UU_{n-1})."""
    k1, _ = k_indices(ell)
    xt = xi_theta(fam, n, ell)
    left = creation(fam, n, ell, annihilation(fam, n, ell, fam.poly(n)))
    right = creation(fam, n, ell, xt.xi[(1, k1)] * fam.poly(n - 1))
    return left - right


# -- three-term recurrence ------------------------------------------------


def ttrr_coeffs(fam: SobolevFamily, n: int, ell: int, fault: str | None = None) -> TTRRCoeffs:
    if n < 1:
        raise IndexOutOfRange("the rational recurrence needs n >= 1")
    k1, k2 = k_indices(ell)
    key = ("TTRR", n, ell)
    cache = fam.__dict__.setdefault("_ladder", {})
    if fault is None and key in cache:
        return cache[key]
    a, b = xi_theta(fam, n, ell, fault), xi_theta(fam, n + 1, ell, fault)
    alpha = _tamper("alpha", a.theta * b.xi[(2, k2)], fault)
    beta = _tamper("beta", b.theta * a.xi[(2, k1)] - a.theta * b.xi[(1, k2)], fault)
    gamma = _tamper("gamma", b.theta * a.xi[(1, k1)], fault)
    if not alpha:
        raise DegenerateTTRR(f"alpha vanishes identically at n={n}, ell={ell}")
    out = TTRRCoeffs(alpha, beta, gamma)
    if fault is None:
        cache[key] = out
    return out


def ttrr_residual(fam: SobolevFamily, n: int, ell: int, fault: str | None = None) -> RatFunX:
    c = ttrr_coeffs(fam, n, ell, fault)
    return c.alpha * fam.poly(n + 1) - c.beta * fam.poly(n) - c.gamma * fam.poly(n - 1)


# -- holonomic equations --------------------------------------------------


def holonomic_coeffs(
    fam: SobolevFamily, n: int, ell: int, fault: str | None = None, *, factor=None
) -> HolonomicCoeffs:
    """R, S, T and their barred companions.

    ``factor`` replaces the (q^ell - 1) in S and T; it exists only to test
    the alternative reading (q - 1) of that factor.
    """
    if n < 1:
        raise IndexOutOfRange("the holonomic equations are built for n >= 1")
    k1, k2 = k_indices(ell)
    xt = xi_theta(fam, n, ell, fault)
    th = xt.theta
    x11, x21, x12, x22 = xt.xi[(1, k1)], xt.xi[(2, k1)], xt.xi[(1, k2)], xt.xi[(2, k2)]
    if not x11:
        raise DegenerateXi(f"Xi_(1,{k1}) vanishes identically at n={n}")
    s = _sbase(fam, ell)
    factor = s - 1 if factor is None else factor
    bracket = th + x12 * Poly((0, factor))
    dx11 = _D(fam, x11, ell)
    shared = bracket * dx11 / x11
    R = _tamper("R", th * _dilate(fam, th, ell), fault)
    S = _tamper("S", th * (_D(fam, th, ell) - _dilate(fam, x21, ell) - x12) - th * shared, fault)
    T = _tamper(
        "T",
        x12 * x21 - th * _D(fam, x21, ell) + x21 * shared - _dilate(fam, x11, ell) * x22,
        fault,
    )
    inv = -ell
    Rb = _dilate(fam, R, inv)
    Tb = _dilate(fam, T, inv)
    Sb = _dilate(fam, S, inv) + Tb * Poly((0, _sbase(fam, inv) - 1))
    return HolonomicCoeffs(R, S, T, Rb, Sb, Tb)


def holonomic1_residual(fam: SobolevFamily, n: int, ell: int, fault: str | None = None, *, factor=None) -> RatFunX:
    """R D^2_{q^ell} UU_n + S D_{q^ell} UU_n + T UU_n."""
    h = holonomic_coeffs(fam, n, ell, fault, factor=factor)
    u = _rat(fam.poly(n))
    d1 = _D(fam, u, ell)
    d2 = _D(fam, d1, ell)
    return h.R * d2 + h.S * d1 + h.T * u


def mixed_second_derivative(fam: SobolevFamily, f, ell: int) -> RatFunX:
    """D_q D_{1/q} f for ell = -1 and D_{1/q} D_q f for ell = 1 (inner operator first)."""
    return _D(fam, _D(fam, f, ell), -ell)


def holonomic2_residual(fam: SobolevFamily, n: int, ell: int, fault: str | None = None) -> RatFunX:
    """Rbar DD^2 UU_n + Sbar D_{q^-ell} UU_n + Tbar UU_n."""
    h = holonomic_coeffs(fam, n, ell, fault)
    u = _rat(fam.poly(n))
    return h.Rbar * mixed_second_derivative(fam, u, ell) + h.Sbar * _D(fam, u, -ell) + h.Tbar * u


# -- classical limits -----------------------------------------------------


def _proportional(triple_a, triple_b) -> bool:
    ratio = None
    for p, c in zip(triple_a, triple_b):
        if not c:
            if p:
                return False
            continue
        r = _rat(p) / _rat(c)
        if ratio is None:
            ratio = r
        elif r != ratio:
            return False
    return ratio is not None and bool(ratio)


def classical_ttrr_check(fam: SobolevFamily, n: int, ell: int) -> bool:
    """With lam = mu = 0: beta/alpha = x - beta_n and gamma/alpha = -gamma_n."""
    c = ttrr_coeffs(fam, n, ell)
    asc = fam.asc
    return c.beta / c.alpha == _rat(Poly((-asc.beta(n), 1))) and c.gamma / c.alpha == _rat(-asc.gamma(n))


def classical_holonomic_check(fam: SobolevFamily, n: int) -> bool:
    """With lam = mu = 0 and ell = -1, both equations are multiples of the
    classical one: (R, S, T) of (sigma(x/q), tau(x/q) + lambda_n (1/q - 1) x,
    lambda_n) and (Rbar, Sbar, Tbar) of (sigma, tau, lambda_n)."""
    asc, q = fam.asc, fam.ctx.q
    h = holonomic_coeffs(fam, n, -1)
    data = asc.equation_data(n)
    lam_n = data.lambda_nq.constant_value() if hasattr(data.lambda_nq, "constant_value") else data.lambda_nq
    sig, tau = asc.sigma(), data.tau
    first = (sig.dilate_by(1 / q), tau.dilate_by(1 / q) + Poly((0, lam_n * (1 / q - 1))), Poly.const(lam_n))
    second = (sig, tau, Poly.const(lam_n))
    return _proportional((h.R, h.S, h.T), first) and _proportional((h.Rbar, h.Sbar, h.Tbar), second)
