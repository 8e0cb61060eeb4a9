"""Grid samples of UU_n on [a, 1] (figure data)."""

from __future__ import annotations

from fractions import Fraction

from .context import mpf_of
from .errors import InvalidContext
from .scalar import MP, RealScalar, ZRat, scalar_eval_z
from .sobolev import SobolevFamily


def uniform_grid(lo: Fraction, hi: Fraction, points: int) -> list[Fraction]:
    """``points`` equally spaced exact nodes from lo to hi inclusive."""
    if points < 2 or not lo < hi:
        raise InvalidContext(f"need at least 2 points on a non-empty interval, got {points} on [{lo}, {hi}]")
    step = (hi - lo) / (points - 1)
    return [lo + i * step for i in range(points)]


def numeric_coeffs(fam: SobolevFamily, n: int) -> list:
    """Coefficients of UU_n as mpf, with Z evaluated numerically in the exact backend."""
    ctx = fam.ctx
    out = []
    for c in fam.poly(n).coeffs:
        if isinstance(c, RealScalar):
            out.append(c.v)
        elif isinstance(c, ZRat):
            out.append(scalar_eval_z(c, ctx.z_numeric))
        else:
            out.append(mpf_of(c))
    return out


def _horner(cs, x):
    acc = MP.mpf(0)
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def sample_family(fam: SobolevFamily, n_list, points: int = 201) -> list[tuple]:
    """Rows (x, n, value) for every n in ``n_list`` over the grid on [a, 1]."""
    grid = uniform_grid(fam.ctx.a, Fraction(1), points)
    xs = [mpf_of(x) for x in grid]
    rows = []
    for n in n_list:
        cs = numeric_coeffs(fam, n)
        rows.extend((x, n, _horner(cs, x)) for x in xs)
    return rows
