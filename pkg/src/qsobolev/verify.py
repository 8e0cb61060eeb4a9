"""The identity-verification suite.

Each check produces an ``IdentityReport``.  ``hard`` checks decide the exit
status, ``classical`` ones are the lambda = mu = 0 degenerations (also
binding), and ``info`` records are comparisons with claims that are known
or suspected to be wrong; those never fail the suite.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Iterable

from . import jfrac, ladder
from .context import QContext
from .errors import QSobolevError, UndefinedAuxiliary
from .qpoly import RatFunX, q_derivative_iter
from .sobolev import (
    SobolevFamily,
    compare_reference_u3_j2,
    connection_coeffs,
    connection_residuals,
    expand_in_asc,
    first_connection,
    fourier_coeffs,
    hypergeom_eval,
    inner_product,
    inverse_connection,
    reference_low_degree,
    sobolev_poly_gs,
)

SAMPLE_POINTS = tuple(
    Fraction(s)
    for s in ("1/3", "2/3", "3/5", "-1/3", "-2/5", "1/5", "4/7", "-3/7", "5/9", "-1/7", "2/9", "-5/8")
)


@dataclass(frozen=True)
class IdentityReport:
    identity: str
    n: int
    ell: int | None
    j: int
    params: dict
    passed: bool
    kind: str = "hard"
    detail: str = ""
    witness: str | None = None

    @property
    def binding(self) -> bool:
        return self.kind != "info"

    def sort_key(self):
        return (self.identity, self.n, 0 if self.ell is None else self.ell, self.detail)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Check:
    identity: str
    n: int
    ell: int | None
    run: Callable[[], object]
    kind: str = "hard"
    detail: str = ""


@dataclass(frozen=True)
class SuiteLimits:
    """Largest n per group; ``None`` falls back to the suite's n_max."""

    asc: int | None = None
    kernel: int | None = None
    sobolev: int | None = None
    ladder: int | None = None
    holonomic: int | None = 5
    hypergeometric: int | None = 5
    jfrac: int | None = 5
    orthogonality: int | None = None

    def get(self, name: str, n_max: int) -> int:
        v = getattr(self, name)
        return n_max if v is None else min(v, n_max)


def _witness(value) -> str:
    if isinstance(value, RatFunX):
        return f"numerator {value.num}"
    return str(value)


def _evaluate(check: Check, ctx: QContext) -> IdentityReport:
    try:
        value = check.run()
    except QSobolevError as exc:
        passed, witness = False, f"{type(exc).__name__}: {exc}"
    else:
        if isinstance(value, bool):
            passed, witness = value, None if value else "comparison failed"
        else:
            passed = not value
            witness = None if passed else _witness(value)
    params = {"q": str(ctx.q), "a": str(ctx.a), "lambda": str(ctx.lam), "mu": str(ctx.mu)}
    return IdentityReport(check.identity, check.n, check.ell, ctx.j, params, passed, check.kind, check.detail, witness)


# -- check builders -------------------------------------------------------


def _asc_checks(fam: SobolevFamily, top: int) -> Iterable[Check]:
    asc = fam.asc
    ctx = fam.ctx
    for n in range(top + 1):
        yield Check("asc.recurrence", n, None, lambda n=n: asc.recurrence_residual(n))
        yield Check("asc.structure_relation", n, None, lambda n=n: asc.structure_residual(n))
        yield Check("asc.second_order", n, None, lambda n=n: asc.second_order_residual(n))
        yield Check("asc.hypergeometric", n, None, lambda n=n: asc.poly(n) - asc.poly_hypergeometric(n))
        for k in range(n + 1):
            yield Check(
                "asc.forward_shift", n, None,
                lambda n=n, k=k: q_derivative_iter(ctx, asc.poly(n), 1, k) - asc.forward_shift(n, k),
                detail=f"k={k}",
            )


def _kernel_checks(fam: SobolevFamily, top: int) -> Iterable[Check]:
    asc, ctx = fam.asc, fam.ctx
    for n in range(top + 1):
        yield Check("asc.christoffel_darboux", n, None, lambda n=n: asc.kernel_sum(n) - asc.cd_kernel(n))
    for n in range(1, top + 1):
        for label, y0 in (("a", ctx.a), ("1", Fraction(1))):

            def split(n=n, y0=y0):
                A, B = asc.kernel_ab_coeffs(n, y0)
                return A * asc.poly(n) + B * asc.poly(n - 1) - asc.kernel_eval_y(n - 1, ctx.j, y0)

            yield Check("asc.kernel_splitting", n, None, split, detail=f"y0={label}")


def _orthogonality_checks(fam: SobolevFamily, top: int) -> Iterable[Check]:
    for n in range(1, top + 1):
        for m in range(n):
            yield Check(
                "sobolev.orthogonality", n, None,
                lambda m=m, n=n: inner_product(fam, fam.poly(m), fam.poly(n)), detail=f"m={m}",
            )


def admissible_points(fam: SobolevFamily, n: int, count: int = 5) -> list[Fraction]:
    """The first ``count`` sample points where the 3phi2 form of UU_n is defined."""
    good = []
    for x0 in SAMPLE_POINTS:
        try:
            hypergeom_eval(fam, n, x0)
        except UndefinedAuxiliary:
            continue
        good.append(x0)
        if len(good) == count:
            break
    return good


def _sobolev_checks(fam: SobolevFamily, top: int, hyper_top: int) -> Iterable[Check]:
    ctx, asc = fam.ctx, fam.asc
    for n in range(top + 1):
        yield Check("sobolev.gram_schmidt", n, None, lambda n=n: fam.poly(n) - sobolev_poly_gs(fam, n))
        yield Check(
            "sobolev.monic_degree", n, None,
            lambda n=n: fam.poly(n).degree == n and fam.poly(n).is_monic(),
        )
        if n < ctx.j:
            yield Check("sobolev.small_degree", n, None, lambda n=n: fam.poly(n) - asc.poly(n))

        def fourier(n=n):
            exp = expand_in_asc(asc, fam.poly(n))
            got = fourier_coeffs(fam, n)
            return all(exp[k] == got[k] for k in range(n)) and exp[n] == 1

        yield Check("sobolev.fourier_coefficients", n, None, fourier)
    for n in range(1, top + 1):
        yield Check("sobolev.connection_first", n, None, lambda n=n: connection_residuals(fam, n)[0])
        yield Check("sobolev.connection_second", n, None, lambda n=n: connection_residuals(fam, n)[1])

        def inverse(n=n):
            un, um = inverse_connection(fam, n)
            return un == asc.poly(n) and um == asc.poly(n - 1)

        yield Check("sobolev.inverse_connection", n, None, inverse)
    if ctx.lam or ctx.mu:
        for n in range(1, hyper_top + 1):
            if not first_connection(fam, n)[1]:
                continue

            def hyper(n=n):
                pts = admissible_points(fam, n)
                if len(pts) < 5:
                    return False
                p = fam.poly(n)
                return all(hypergeom_eval(fam, n, x0) == p(x0) for x0 in pts)

            yield Check("sobolev.three_phi_two", n, None, hyper)
    if ctx.j in (2, 3):
        for n, ref in reference_low_degree(ctx).items():
            yield Check("sobolev.reference_low_degree", n, None, lambda n=n, ref=ref: fam.poly(n) - ref)
    if ctx.j == 2:
        for row in _u3_rows(fam):
            yield row


def _u3_rows(fam: SobolevFamily) -> Iterable[Check]:
    cache = {}

    def rows():
        if "rows" not in cache:
            cache["rows"] = {r["coefficient"]: r for r in compare_reference_u3_j2(fam)}
        return cache["rows"]

    for name in ("a2", "a1", "a0"):
        yield Check(
            "sobolev.reference_u3", 3, None, lambda name=name: rows()[name]["agree"], kind="info", detail=name
        )


def _ladder_checks(fam: SobolevFamily, top: int, holo_top: int, ells, fault) -> Iterable[Check]:
    for ell in ells:
        k1, k2 = ladder.k_indices(ell)
        for n in range(1, top + 1):
            yield Check("ladder.lemma_first", n, ell, lambda n=n, ell=ell: ladder.lemma_residuals(fam, n, ell, fault)[0])
            yield Check("ladder.lemma_second", n, ell, lambda n=n, ell=ell: ladder.lemma_residuals(fam, n, ell, fault)[1])
            yield Check(
                "ladder.structure_first", n, ell, lambda n=n, ell=ell: ladder.structure_residuals(fam, n, ell, fault)[0]
            )
            yield Check(
                "ladder.structure_second", n, ell, lambda n=n, ell=ell: ladder.structure_residuals(fam, n, ell, fault)[1]
            )
            yield Check(
                "ladder.annihilation", n, ell, lambda n=n, ell=ell: ladder.ladder_apply(fam, n, ell, "annihilate", fault)
            )
            yield Check("ladder.creation", n, ell, lambda n=n, ell=ell: ladder.ladder_apply(fam, n, ell, "create", fault))
            if fault is None:
                yield Check("ladder.composition", n, ell, lambda n=n, ell=ell: ladder.composition_residual(fam, n, ell))
            yield Check("ladder.recurrence", n, ell, lambda n=n, ell=ell: ladder.ttrr_residual(fam, n, ell, fault))
        for n in range(1, holo_top + 1):
            yield Check(
                "ladder.holonomic_first", n, ell, lambda n=n, ell=ell: ladder.holonomic1_residual(fam, n, ell, fault)
            )
            yield Check(
                "ladder.holonomic_second", n, ell, lambda n=n, ell=ell: ladder.holonomic2_residual(fam, n, ell, fault)
            )
            if fault is None and ell == -1:
                q = fam.ctx.q
                yield Check(
                    "ladder.holonomic_first_alt_factor", n, ell,
                    lambda n=n, ell=ell: ladder.holonomic1_residual(fam, n, ell, factor=q - 1),
                    kind="info",
                )


def _jfrac_checks(fam: SobolevFamily, top: int, ells) -> Iterable[Check]:
    for ell in ells:
        cache = {}

        def coeffs(ell=ell, cache=cache):
            if "jc" not in cache:
                cache["jc"] = jfrac.jfraction_coeffs(fam, ell, top + 2)
            return cache["jc"]

        for n in range(top + 1):
            yield Check(
                "jfrac.denominators", n, ell,
                lambda n=n, ell=ell: jfrac.denominators(fam, ell, n, coeffs())[n] - RatFunX.of(fam.poly(n)),
            )
            yield Check(
                "jfrac.convergent_denominators", n, ell,
                lambda n=n, ell=ell: jfrac.convergent(fam, ell, n, coeffs())["denominators"].equal,
            )
            yield Check(
                "jfrac.convergent_numerators", n, ell,
                lambda n=n, ell=ell: jfrac.convergent(fam, ell, n, coeffs())["numerators"].equal,
            )
            yield Check("jfrac.omega", n, ell, lambda n=n, ell=ell: jfrac.omega_residual(fam, ell, n, coeffs()))
        for n in range(1, top + 1):
            yield Check("jfrac.cross", n, ell, lambda n=n, ell=ell: jfrac.cross_residual(fam, ell, n, coeffs()))
            yield Check(
                "jfrac.closed_sum", n, ell,
                lambda n=n, ell=ell: jfrac.closed_sum_probe(fam, ell, n, coeffs()).agree, kind="info",
            )


def _classical_checks(fam: SobolevFamily, top: int, holo_top: int, ells) -> Iterable[Check]:
    asc = fam.asc
    for n in range(top + 1):
        yield Check("classical.sobolev_equals_asc", n, None, lambda n=n: fam.poly(n) - asc.poly(n), kind="classical")
    for ell in ells:
        for n in range(1, top + 1):
            yield Check(
                "classical.recurrence", n, ell, lambda n=n, ell=ell: ladder.classical_ttrr_check(fam, n, ell),
                kind="classical",
            )
    # D^2 UU_1 = 0 leaves R free at n = 1, so proportionality starts at n = 2
    for n in range(2, holo_top + 1):
        yield Check(
            "classical.holonomic", n, -1, lambda n=n: ladder.classical_holonomic_check(fam, n), kind="classical"
        )


# -- driver ---------------------------------------------------------------


def build_checks(
    fam: SobolevFamily,
    n_max: int,
    ells=(-1, 1),
    fault: str | None = None,
    limits: SuiteLimits | None = None,
) -> list[Check]:
    if fault is not None and fault not in ladder.FAULT_TARGETS:
        raise ValueError(f"unknown fault target {fault!r}; choose from {', '.join(ladder.FAULT_TARGETS)}")
    lim = limits or SuiteLimits()
    ctx = fam.ctx
    checks: list[Check] = []
    checks += _asc_checks(fam, lim.get("asc", n_max))
    checks += _kernel_checks(fam, lim.get("kernel", n_max))
    checks += _orthogonality_checks(fam, lim.get("orthogonality", n_max))
    checks += _sobolev_checks(fam, lim.get("sobolev", n_max), lim.get("hypergeometric", n_max))
    holo = lim.get("holonomic", n_max)
    checks += _ladder_checks(fam, lim.get("ladder", n_max), holo, ells, fault)
    checks += _jfrac_checks(fam, lim.get("jfrac", n_max), ells)
    if not (ctx.lam or ctx.mu):
        checks += _classical_checks(fam, n_max, holo, ells)
    return checks


def _warm(fam: SobolevFamily, n_max: int) -> None:
    # fill the append-only caches in order before any fan-out
    for n in range(n_max + 3):
        fam.poly(n)
        if n:
            connection_coeffs(fam, n)


def run_suite(
    ctx: QContext,
    n_max: int,
    ells=(-1, 1),
    fault: str | None = None,
    workers: int = 1,
    limits: SuiteLimits | None = None,
    family: SobolevFamily | None = None,
) -> list[IdentityReport]:
    """Run every check and return the reports sorted by (identity, n, ell, detail)."""
    fam = family or SobolevFamily(ctx)
    checks = build_checks(fam, n_max, tuple(ells), fault, limits)
    _warm(fam, n_max)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda c: _evaluate(c, ctx), checks))
    else:
        reports = [_evaluate(c, ctx) for c in checks]
    return sorted(reports, key=IdentityReport.sort_key)


def suite_passed(reports: Iterable[IdentityReport]) -> bool:
    return all(r.passed for r in reports if r.binding)


def first_failure(reports: Iterable[IdentityReport]) -> IdentityReport | None:
    return next((r for r in reports if r.binding and not r.passed), None)
