from fractions import Fraction

import pytest

from qsobolev.context import QContext
from qsobolev.errors import IndexOutOfRange, UndefinedAuxiliary
from qsobolev.qpoly import Poly, RatFunX
from qsobolev.scalar import ZRat
from qsobolev.sobolev import (
    SobolevFamily,
    compare_reference_u3_j2,
    connection_coeffs,
    connection_residuals,
    fourier_coeffs,
    gram_system,
    hypergeom_eval,
    inner_product,
    inverse_connection,
    reference_low_degree,
    sobolev_poly_gs,
)

from conftest import PARAM_SETS, family

Z = ZRat.gen()
F = Fraction

# Independently computed (computer algebra over Q(Z)), constant term first.
EXPECTED_U4_HALF = [
    7 * (Z + 288) / (64 * (Z + 48)),
    0,
    -35 * (Z + 96) / (32 * (Z + 48)),
    0,
    1,
]
EXPECTED_U3_THIRD_J2 = [
    -2 * (152 * Z - 2403) / (27 * (16 * Z + 135)),
    -13 * (16 * Z + 387) / (9 * (16 * Z + 135)),
    26 * (8 * Z - 27) / (9 * (16 * Z + 135)),
    1,
]
_D4 = 256 * Z**2 + 73764 * Z + 255879
EXPECTED_U4_THIRD_J2 = [
    (35072 * Z**2 + 37778508 * Z + 283258053) / (729 * _D4),
    -10 * (19456 * Z**2 + 895644 * Z + 36078939) / (729 * _D4),
    -260 * (128 * Z**2 + 59868 * Z + 255879) / (81 * _D4),
    10 * (1024 * Z**2 + 164484 * Z + 767637) / (27 * _D4),
    1,
]
EXPECTED_U3_THIRD_J3 = [F(-19, 27), F(-13, 9), F(13, 9), 1]
EXPECTED_U4_THIRD_J3 = [
    (8768 * Z + 6323265) / (729 * (64 * Z + 5265)),
    -80 * (608 * Z - 93717) / (729 * (64 * Z + 5265)),
    -130 * (64 * Z + 15093) / (81 * (64 * Z + 5265)),
    80 * (32 * Z - 1053) / (27 * (64 * Z + 5265)),
    1,
]


def test_low_degree_half():
    fam = family("half")
    assert fam.poly(0) == Poly.const(1)
    assert fam.poly(1) == Poly.x()
    assert fam.poly(3) == Poly((0, F(-7, 8), 0, 1))
    assert fam.poly(4) == Poly(EXPECTED_U4_HALF)


@pytest.mark.parametrize(
    "j, n, expected",
    [
        (2, 3, EXPECTED_U3_THIRD_J2),
        (2, 4, EXPECTED_U4_THIRD_J2),
        (3, 3, EXPECTED_U3_THIRD_J3),
        (3, 4, EXPECTED_U4_THIRD_J3),
    ],
)
def test_frozen_polynomials(j, n, expected):
    assert family("third", j=j).poly(n) == Poly(expected)


def test_gram_half():
    g = gram_system(family("half"), 3)
    assert g.det == (Z + 48) / Z
    assert tuple(g.b) == (F(-21, 8), F(21, 8))
    assert tuple(g.deltas) == (F(-21, 8), F(21, 8))


def test_gram_third():
    g = gram_system(family("third"), 3)
    assert g.det == (16 * Z + 135) / (16 * Z)
    assert tuple(g.b) == (F(-52, 27), F(104, 27))
    assert g.deltas[0] == -208 * (4 * Z + 81) / (27 * (16 * Z + 135))
    assert g.deltas[1] == 52 * (32 * Z + 81) / (27 * (16 * Z + 135))


def test_inner_product_examples():
    fam = family("half", j=1)
    x = Poly.x()
    assert inner_product(fam, x, x) == (Z + 8) / 4
    assert inner_product(fam, Poly.const(1), Poly.const(1)) == Z / 2


@pytest.mark.parametrize("name", sorted(PARAM_SETS))
@pytest.mark.parametrize("j", [1, 2, 3])
def test_orthogonality_and_gs(name, j):
    fam = family(name, j=j)
    for n in range(7):
        p = fam.poly(n)
        assert p.degree == n and p.is_monic()
        assert p == sobolev_poly_gs(fam, n)
        for m in range(n):
            assert not inner_product(fam, fam.poly(m), p)


@pytest.mark.parametrize("j", [1, 2, 3])
def test_small_degree_is_classical(j):
    fam = family("third", j=j)
    for n in range(j + 1):
        assert fam.poly(n) == fam.asc.poly(n)


def test_no_sobolev_part():
    fam = family("third", lam=0, mu=0)
    for n in range(6):
        assert fam.poly(n) == fam.asc.poly(n)


@pytest.mark.parametrize("name", sorted(PARAM_SETS))
def test_fourier_expansion(name):
    fam = family(name)
    for n in range(6):
        total = fam.asc.poly(n)
        for k, c in enumerate(fourier_coeffs(fam, n)):
            total = total + fam.asc.poly(k).scale(c)
        assert total == fam.poly(n)


@pytest.mark.parametrize("name", sorted(PARAM_SETS))
@pytest.mark.parametrize("j", [1, 2, 3])
def test_connection_formulas(name, j):
    fam = family(name, j=j)
    for n in range(1, 7):
        r1, r2 = connection_residuals(fam, n)
        assert not r1 and not r2
        assert inverse_connection(fam, n) == (fam.asc.poly(n), fam.asc.poly(n - 1))


def test_connection_first_step():
    cc = connection_coeffs(family("half"), 1)
    assert cc.C2 == RatFunX(0) and cc.D2 == RatFunX(1)
    with pytest.raises(IndexOutOfRange):
        connection_coeffs(family("half"), 0)


@pytest.mark.parametrize(
    "name, n, x0",
    [
        ("half", 3, F(1, 3)),
        ("half", 4, F(2, 3)),
        ("half", 5, F(3, 5)),
        ("third", 3, F(2, 5)),
        ("third", 4, F(2, 3)),
        ("third", 5, F(-2, 5)),
    ],
)
def test_three_phi_two(name, n, x0):
    fam = family(name)
    assert hypergeom_eval(fam, n, x0) == fam.poly(n)(x0)


def test_three_phi_two_at_lattice_pole():
    # x = q is a zero of x [-]_q 1, so C_(1,n) has a pole there
    with pytest.raises(UndefinedAuxiliary):
        hypergeom_eval(family("third"), 3, F(1, 3))


def test_three_phi_two_rejects_origin():
    with pytest.raises(UndefinedAuxiliary):
        hypergeom_eval(family("half"), 3, 0)
    with pytest.raises(IndexOutOfRange):
        hypergeom_eval(family("half"), 0, F(1, 3))


@pytest.mark.parametrize("name", sorted(PARAM_SETS))
@pytest.mark.parametrize("j", [2, 3])
def test_reference_low_degree(name, j):
    fam = family(name, j=j)
    for n, p in reference_low_degree(fam.ctx).items():
        assert fam.poly(n) == p


def test_reference_u3_closed_forms():
    rows = {r["coefficient"]: r["agree"] for r in compare_reference_u3_j2(family("third"))}
    # a_2 and a_0 agree; the reference a_1 has the wrong denominator
    assert rows == {"a2": True, "a1": False, "a0": True}


def test_approx_backend_matches_exact():
    q, a, lam, mu = PARAM_SETS["third"]
    exact = family("third")
    approx = SobolevFamily(QContext(q, a, lam, mu, j=2, backend="approx"))
    z = exact.ctx.z_numeric
    for n in range(5):
        for ce, ca in zip(exact.poly(n).coeffs, approx.poly(n).coeffs):
            ev = ce.eval_z(z) if isinstance(ce, ZRat) else ce
            assert abs(ca.v - ev) < 1e-30 * (1 + abs(ev))
