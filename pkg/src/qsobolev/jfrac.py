"""Jacobi fractions built from the rational three-term recurrence.

With hatted coefficients b_n = beta_{ell,n-1}/alpha_{ell,n-1} and
g_n = gamma_{ell,n-1}/alpha_{ell,n-1}, the polynomials UU_n are the
denominators of the convergents of

    b_0 + g_1/(b_1 + g_2/(b_2 + ...))

and UU_{n+1} are the numerators of the shifted fraction with
tilde_b_n = b_{n+1}, tilde_g_n = g_{n+1}.

The recurrence only exists for n >= 1, so the first step is fixed by hand:
b_1 = UU_1 (because U_{-1} = 0) and g_1 = 1.  g_1 only enters the
numerators, so any nonzero choice gives the same identities.  b_0 is free
and defaults to 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import IndexOutOfRange, ZeroTailDenominator
from .ladder import k_indices, ttrr_coeffs
from .qpoly import RatFunX
from .sobolev import SobolevFamily


@dataclass(frozen=True)
class JFractionCoeffs:
    ell: int
    beta_hat: tuple  # index 0..n_max
    gamma_hat: tuple  # index 0 unused

    def beta_tilde(self, n: int) -> RatFunX:
        return self.beta_hat[n + 1]

    def gamma_tilde(self, n: int) -> RatFunX:
        return self.gamma_hat[n + 1]

    @property
    def n_max(self) -> int:
        return len(self.beta_hat) - 1


@dataclass(frozen=True)
class ConvergentPair:
    numerator: RatFunX
    denominator: RatFunX
    cf_value: RatFunX
    equal: bool


@dataclass(frozen=True)
class ClosedSumRecord:
    n: int
    ell: int
    ratio: RatFunX
    closed_sum: RatFunX
    agree: bool
    witness: RatFunX | None = field(default=None)


_ZERO = RatFunX(0)
_ONE = RatFunX(1)


def jfraction_coeffs(fam: SobolevFamily, ell: int, n_max: int, beta_hat0=None) -> JFractionCoeffs:
    """Hatted coefficients up to index ``n_max``.

    Raises DegenerateTTRR if some alpha_{ell,n} vanishes identically.
    """
    k_indices(ell)
    if n_max < 1:
        raise IndexOutOfRange("need n_max >= 1")
    b = [RatFunX.of(0 if beta_hat0 is None else beta_hat0), RatFunX.of(fam.poly(1))]
    g = [_ZERO, _ONE]
    for n in range(2, n_max + 1):
        c = ttrr_coeffs(fam, n - 1, ell)
        b.append(c.beta / c.alpha)
        g.append(c.gamma / c.alpha)
    return JFractionCoeffs(ell, tuple(b), tuple(g))


def _three_term(b, g, first: int, last: int, start):
    """Run y_n = b(n) y_{n-1} + g(n) y_{n-2} for first <= n <= last."""
    ym2, ym1 = start
    out = []
    for n in range(first, last + 1):
        ym2, ym1 = ym1, b(n) * ym1 + g(n) * ym2
        out.append(ym1)
    return out


def numerators_N(fam: SobolevFamily, ell: int, n_max: int, coeffs: JFractionCoeffs | None = None) -> list:
    """N_0..N_{n_max} from N_{-2} = 0, N_{-1} = 1."""
    jc = coeffs or jfraction_coeffs(fam, ell, max(n_max, 1))
    return _three_term(lambda n: jc.beta_hat[n], lambda n: jc.gamma_hat[n], 0, n_max, (_ZERO, _ONE))


def denominators(fam: SobolevFamily, ell: int, n_max: int, coeffs: JFractionCoeffs | None = None) -> list:
    """Q_0..Q_{n_max} from Q_{-1} = 0, Q_0 = 1; these should be UU_n."""
    jc = coeffs or jfraction_coeffs(fam, ell, max(n_max, 1))
    return [_ONE] + _three_term(lambda n: jc.beta_hat[n], lambda n: jc.gamma_hat[n], 1, n_max, (_ZERO, _ONE))


def numerators_M(fam: SobolevFamily, ell: int, n_max: int, coeffs: JFractionCoeffs | None = None) -> list:
    """M_0..M_{n_max} from M_{-1} = 0, M_0 = 1 with the tilded coefficients."""
    jc = coeffs or jfraction_coeffs(fam, ell, n_max + 1)
    return [_ONE] + _three_term(jc.beta_tilde, jc.gamma_tilde, 1, n_max, (_ZERO, _ONE))


def denominators_check(fam: SobolevFamily, ell: int, n_max: int) -> list[tuple[int, RatFunX]]:
    """(n, Q_n - UU_n) for n <= n_max; every residual must vanish."""
    qs = denominators(fam, ell, n_max)
    return [(n, qs[n] - RatFunX.of(fam.poly(n))) for n in range(n_max + 1)]


def continued_fraction(b, g, n: int) -> RatFunX:
    """b(0) + g(1)/(b(1) + ... + g(n)/b(n)), evaluated from the bottom."""
    value = b(n)
    for i in range(n - 1, -1, -1):
        if not value:
            raise ZeroTailDenominator(f"tail of the continued fraction vanishes at depth {i + 1}")
        value = b(i) + g(i + 1) / value
    return value


def convergent(fam: SobolevFamily, ell: int, n: int, coeffs: JFractionCoeffs | None = None) -> dict:
    """Both convergent forms at depth ``n``.

    ``"denominators"``: N_n / UU_n against the hatted fraction.
    ``"numerators"``: UU_{n+1} / M_n against the tilded fraction.
    """
    jc = coeffs or jfraction_coeffs(fam, ell, n + 1)
    nn = numerators_N(fam, ell, n, jc)[n]
    u = RatFunX.of(fam.poly(n))
    cf1 = continued_fraction(lambda i: jc.beta_hat[i], lambda i: jc.gamma_hat[i], n)
    mm = numerators_M(fam, ell, n, jc)[n]
    u1 = RatFunX.of(fam.poly(n + 1))
    cf2 = continued_fraction(jc.beta_tilde, jc.gamma_tilde, n)
    return {
        "denominators": ConvergentPair(nn, u, cf1, nn / u == cf1),
        "numerators": ConvergentPair(u1, mm, cf2, u1 / mm == cf2),
    }


def cross_residual(fam: SobolevFamily, ell: int, n: int, coeffs: JFractionCoeffs | None = None) -> RatFunX:
    """N_n UU_{n-1} - N_{n-1} UU_n - (-1)^(n-1) g_1 ... g_n."""
    if n < 1:
        raise IndexOutOfRange("need n >= 1")
    jc = coeffs or jfraction_coeffs(fam, ell, n)
    ns = numerators_N(fam, ell, n, jc)
    prod = _ONE
    for i in range(1, n + 1):
        prod = prod * jc.gamma_hat[i]
    sign = 1 if n % 2 else -1
    lhs = ns[n] * fam.poly(n - 1) - ns[n - 1] * fam.poly(n)
    return lhs - prod * sign


def omega_residual(fam: SobolevFamily, ell: int, n: int, coeffs: JFractionCoeffs | None = None) -> RatFunX:
    """w_{n+1} - (tilde_b_{n+1} + tilde_g_{n+1}/w_n) with w_n = UU_{n+1}/UU_n."""
    jc = coeffs or jfraction_coeffs(fam, ell, n + 2)
    w = [RatFunX(fam.poly(k + 1), fam.poly(k)) for k in (n, n + 1)]
    return w[1] - (jc.beta_tilde(n + 1) + jc.gamma_tilde(n + 1) / w[0])


def closed_sum_probe(fam: SobolevFamily, ell: int, n: int, coeffs: JFractionCoeffs | None = None) -> ClosedSumRecord:
    """Compare UU_{n+1}/UU_n with sum_i tilde_g_i prod_{h>i} tilde_b_h.

    The closed sum is a claim under test, so a mismatch is recorded, not raised.
    """
    if n < 1:
        raise IndexOutOfRange("need n >= 1")
    jc = coeffs or jfraction_coeffs(fam, ell, n + 1)
    ratio = RatFunX(fam.poly(n + 1), fam.poly(n))
    total = _ZERO
    for i in range(1, n + 1):
        term = jc.gamma_tilde(i)
        for h in range(i + 1, n + 1):
            term = term * jc.beta_tilde(h)
        total = total + term
    diff = ratio - total
    return ClosedSumRecord(n, ell, ratio, total, not diff, diff or None)


def convergent_table(fam: SobolevFamily, ell: int, n_max: int) -> list[dict]:
    """JSON-ready records {n, ell, form, numerator, denominator, cf_value, equal}."""
    from .serialize import ratfun_to_json

    jc = jfraction_coeffs(fam, ell, n_max + 1)
    rows = []
    for n in range(n_max + 1):
        for form, pair in convergent(fam, ell, n, jc).items():
            rows.append(
                {
                    "n": n,
                    "ell": ell,
                    "form": form,
                    "numerator": ratfun_to_json(pair.numerator),
                    "denominator": ratfun_to_json(pair.denominator),
                    "cf_value": ratfun_to_json(pair.cf_value),
                    "equal": pair.equal,
                }
            )
    return rows
