import pytest

from qsobolev.errors import IndexOutOfRange
from qsobolev.ladder import (
    classical_holonomic_check,
    classical_ttrr_check,
    composition_residual,
    holonomic1_residual,
    holonomic2_residual,
    k_indices,
    ladder_apply,
    lemma_coeffs,
    lemma_residuals,
    mixed_second_derivative,
    structure_residuals,
    ttrr_coeffs,
    ttrr_residual,
    xi_theta,
)
from qsobolev.qpoly import Poly, RatFunX

from conftest import PARAM_SETS, family

CASES = [(name, j) for name in sorted(PARAM_SETS) for j in (1, 2, 3)]
ELLS = (-1, 1)


def test_k_indices():
    assert k_indices(-1) == (1, 2)
    assert k_indices(1) == (3, 4)
    with pytest.raises(ValueError):
        k_indices(0)


def test_first_degree_forward():
    # UU_1 = x - (a + 1) and UU_0 = 1: D_q UU_1 = 1 = U_0
    fam = family("half")
    lc = lemma_coeffs(fam, 1, 1)
    assert lc.E[3] == RatFunX(0) and lc.F[3] == RatFunX(1)
    assert lc.E[4] == RatFunX(0) and lc.F[4] == RatFunX(0)
    with pytest.raises(IndexOutOfRange):
        lemma_coeffs(fam, 0, 1)


def test_first_degree_backward_uses_sigma():
    fam = family("half")
    lc = lemma_coeffs(fam, 1, -1)
    assert lc.sigma_ell == fam.asc.sigma()
    # sigma * 1 = U_2 + b U_1 + c U_0 rewritten in U_1, U_0 with x-dependent coefficients
    assert lc.E[1] * fam.asc.poly(1) + lc.F[1] * fam.asc.poly(0) == RatFunX.of(fam.asc.sigma())


@pytest.mark.parametrize("name, j", CASES)
@pytest.mark.parametrize("ell", ELLS)
def test_lemma_and_structure(name, j, ell):
    fam = family(name, j=j)
    for n in range(1, 6):
        assert not any(lemma_residuals(fam, n, ell))
        assert not any(structure_residuals(fam, n, ell))


@pytest.mark.parametrize("name, j", CASES)
@pytest.mark.parametrize("ell", ELLS)
def test_ladder_operators(name, j, ell):
    fam = family(name, j=j)
    for n in range(1, 6):
        assert not ladder_apply(fam, n, ell, "annihilate")
        assert not ladder_apply(fam, n, ell, "create")
        assert not composition_residual(fam, n, ell)
    with pytest.raises(ValueError):
        ladder_apply(fam, 2, ell, "sideways")


@pytest.mark.parametrize("name, j", CASES)
@pytest.mark.parametrize("ell", ELLS)
def test_three_term_recurrence(name, j, ell):
    fam = family(name, j=j)
    for n in range(1, 6):
        assert not ttrr_residual(fam, n, ell)
        c = ttrr_coeffs(fam, n, ell)
        assert c.alpha == xi_theta(fam, n, ell).theta * xi_theta(fam, n + 1, ell).xi[(2, k_indices(ell)[1])]


@pytest.mark.parametrize("name, j", CASES)
@pytest.mark.parametrize("ell", ELLS)
def test_holonomic(name, j, ell):
    fam = family(name, j=j)
    for n in range(1, 5):
        assert not holonomic1_residual(fam, n, ell)
        assert not holonomic2_residual(fam, n, ell)


def test_holonomic_factor_reading():
    # S and T carry (q^ell - 1); with (q - 1) the backward equation breaks
    fam = family("half")
    q = fam.ctx.q
    assert not holonomic1_residual(fam, 3, 1, factor=q - 1)
    assert holonomic1_residual(fam, 3, -1, factor=q - 1)


def test_mixed_derivative_order():
    fam = family("half")
    f = Poly((0, 0, 0, 1))
    q = fam.ctx.q
    # D_{1/q} D_q x^3 = [3]_q [2]_{1/q} x
    expected = (1 + q + q * q) * (1 + 1 / q)
    assert mixed_second_derivative(fam, f, 1) == RatFunX(Poly((0, expected)))
    expected_back = (1 + 1 / q + 1 / (q * q)) * (1 + q)
    assert mixed_second_derivative(fam, f, -1) == RatFunX(Poly((0, expected_back)))


@pytest.mark.parametrize("name", sorted(PARAM_SETS))
@pytest.mark.parametrize("ell", ELLS)
def test_classical_ttrr(name, ell):
    fam = family(name, lam=0, mu=0)
    for n in range(1, 6):
        assert classical_ttrr_check(fam, n, ell)


@pytest.mark.parametrize("name", sorted(PARAM_SETS))
def test_classical_holonomic(name):
    fam = family(name, lam=0, mu=0)
    for n in range(2, 6):
        assert classical_holonomic_check(fam, n)


def test_classical_holonomic_degree_one_is_free():
    # D^2 UU_1 = 0, so the first coefficient is unconstrained at n = 1
    fam = family("half", lam=0, mu=0)
    assert not holonomic1_residual(fam, 1, -1)
    assert not classical_holonomic_check(fam, 1)


def test_fault_changes_residual():
    fam = family("third")
    assert ttrr_residual(fam, 2, 1, fault="beta")
    assert not ttrr_residual(fam, 2, 1)
