from fractions import Fraction

import pytest

from qsobolev.asc import ASCFamily, BiPoly
from qsobolev.context import QContext
from qsobolev.errors import IndexOutOfRange
from qsobolev.qpoly import Poly, RatFunX
from qsobolev.scalar import ZRat
from qsobolev.sobolev import expand_in_asc, integral_part

from conftest import PARAM_SETS

Z = ZRat.gen()
F = Fraction


def asc(name="half"):
    q, a, _, _ = PARAM_SETS[name]
    return ASCFamily(QContext(q, a))


def test_first_polynomials_at_minus_one():
    fam = asc()
    assert fam.poly(1) == Poly.x()
    assert fam.poly(2) == Poly((F(-1, 2), 0, 1))
    assert fam.poly(3) == Poly((0, F(-7, 8), 0, 1))


def test_expansion_of_square():
    fam = asc()
    assert expand_in_asc(fam, Poly.monomial(2)) == [F(1, 2), 0, 1]


def test_u1_generic():
    fam = asc("third")
    assert fam.poly(1) == Poly((1, 1))


def test_norms():
    fam = asc()
    assert fam.reduced_norm(0) == F(1, 2)
    assert fam.reduced_norm(1) == F(1, 4)
    assert fam.norm(1) == Z / 4


@pytest.mark.parametrize("name", sorted(PARAM_SETS))
def test_jackson_orthogonality_exact(name):
    fam = asc(name)
    for m in range(6):
        for n in range(m, 6):
            v = integral_part(fam, fam.poly(m), fam.poly(n))
            assert v == (fam.norm(n) if m == n else 0)


@pytest.mark.parametrize("name", sorted(PARAM_SETS))
def test_classical_identities(name):
    fam = asc(name)
    for n in range(10):
        assert fam.poly(n) == fam.poly_hypergeometric(n)
        assert not fam.recurrence_residual(n)
        assert not fam.structure_residual(n)
        assert not fam.second_order_residual(n)
        for k in range(n + 1):
            assert fam.derivative(n, k) == fam.forward_shift(n, k)


def test_forward_shift_example():
    assert asc().forward_shift(2, 1) == Poly.monomial(1, F(3, 2))
    with pytest.raises(IndexOutOfRange):
        asc().forward_shift(2, 3)


@pytest.mark.parametrize("name", sorted(PARAM_SETS))
def test_christoffel_darboux(name):
    fam = asc(name)
    for n in range(7):
        assert fam.cd_kernel(n) == fam.kernel_sum(n)


def test_reproducing_property():
    fam = asc("third")
    y0 = F(2, 7)
    p = Poly((3, -1, 0, 2))
    k = fam.kernel_eval_y(4, 0, y0)
    assert integral_part(fam, p, k) == p(y0)


def test_kernel_example():
    fam = asc()
    assert fam.kernel_eval_y(1, 1, 1) == Poly.monomial(1, 4 / Z)


@pytest.mark.parametrize("name", sorted(PARAM_SETS))
@pytest.mark.parametrize("j", [1, 2, 3])
def test_kernel_splitting(name, j):
    fam = asc(name)
    for y0 in (fam.ctx.a, F(1)):
        for n in range(1, 7):
            A, B = fam.kernel_ab_coeffs(n, y0, j)
            lhs = RatFunX.of(fam.kernel_eval_y(n - 1, j, y0))
            assert lhs == A * fam.poly(n) + B * fam.poly(n - 1)


def test_bipoly_swap_and_eval():
    b = BiPoly.outer(Poly((1, 2)), Poly((0, 3)))
    assert b.swap().eval_y(2) == Poly((0, 15))
    assert b.eval_y(1) == Poly((3, 6))


def test_kernel_operator_form_swaps_indices():
    # D_y^i D_x^jp applied to K_n equals the sum with D^jp on x and D^i on y
    fam = asc("third")
    ctx = fam.ctx
    base = fam.kernel_sum(4)
    for i, jp in ((1, 2), (0, 3), (2, 1)):
        op = base
        for _ in range(jp):
            op = op.q_derivative_x(ctx)
        for _ in range(i):
            op = op.q_derivative_y(ctx)
        assert op == fam.kernel_sum(4, jp, i)
        assert op != fam.kernel_sum(4, i, jp)
