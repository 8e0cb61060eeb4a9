from fractions import Fraction

import pytest

from qsobolev.errors import IndexOutOfRange, ZeroTailDenominator
from qsobolev.jfrac import (
    continued_fraction,
    convergent,
    convergent_table,
    closed_sum_probe,
    cross_residual,
    denominators_check,
    jfraction_coeffs,
    numerators_M,
    omega_residual,
)
from qsobolev.qpoly import Poly, RatFunX

from conftest import PARAM_SETS, family

CASES = [(name, j) for name in sorted(PARAM_SETS) for j in (1, 2, 3)]


def test_continued_fraction_numbers():
    # 1 + 1/(2 + 1/3) = 10/7
    cf = continued_fraction(lambda i: RatFunX(i + 1), lambda i: RatFunX(1), 2)
    assert cf == RatFunX(Fraction(10, 7))


def test_zero_tail():
    with pytest.raises(ZeroTailDenominator):
        continued_fraction(lambda i: RatFunX(0), lambda i: RatFunX(1), 2)


def test_first_coefficients():
    fam = family("half")
    jc = jfraction_coeffs(fam, 1, 4)
    assert jc.beta_hat[0] == RatFunX(0)
    assert jc.beta_hat[1] == RatFunX(Poly.x())
    assert jc.gamma_hat[1] == RatFunX(1)
    assert jc.beta_tilde(1) == jc.beta_hat[2] and jc.n_max == 4
    with pytest.raises(IndexOutOfRange):
        jfraction_coeffs(fam, 1, 0)


def test_free_leading_term():
    fam = family("third")
    jc = jfraction_coeffs(fam, -1, 4, beta_hat0=Fraction(5))
    assert all(not r for _, r in denominators_check(fam, -1, 4))
    assert convergent(fam, -1, 3, jc)["denominators"].equal


@pytest.mark.parametrize("name, j", CASES)
@pytest.mark.parametrize("ell", (-1, 1))
def test_identities(name, j, ell):
    fam = family(name, j=j)
    jc = jfraction_coeffs(fam, ell, 6)
    assert all(not r for _, r in denominators_check(fam, ell, 5))
    for n in range(5):
        pair = convergent(fam, ell, n, jc)
        assert pair["denominators"].equal and pair["numerators"].equal
    for n in range(1, 5):
        assert not cross_residual(fam, ell, n, jc)
        assert not omega_residual(fam, ell, n, jc)


def test_numerators_are_shifted_polynomials():
    fam = family("third", j=3)
    ms = numerators_M(fam, 1, 3)
    assert ms[0] == RatFunX(1)
    assert ms[1] == jfraction_coeffs(fam, 1, 3).beta_hat[2]


def test_closed_sum_does_not_hold():
    fam = family("half")
    rec = closed_sum_probe(fam, 1, 3)
    assert not rec.agree and rec.witness is not None
    with pytest.raises(IndexOutOfRange):
        closed_sum_probe(fam, 1, 0)


def test_table_rows():
    rows = convergent_table(family("half"), -1, 2)
    assert len(rows) == 6
    assert {r["form"] for r in rows} == {"denominators", "numerators"}
    assert all(r["equal"] for r in rows)
