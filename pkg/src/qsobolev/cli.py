"""Command-line interface: ``qsobolev {poly,verify,plot-data,jfrac,table}``.

Exit codes: 0 success, 1 a binding identity failed, 2 invalid
configuration, 3 the construction degenerated (singular Gram system or
vanishing connection determinant).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from .context import QContext
from .errors import DegenerateConnection, InvalidContext, QSobolevError, SingularGram
from .qpoly import Poly, poly_str
from .scalar import MP, RealScalar, parse_rational, to_text
from .serialize import poly_to_json

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_DEGENERATE = 0, 1, 2, 3
DEFAULT_NMAX_CAP = 12


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    q: Fraction
    a: Fraction
    lam: Fraction
    mu: Fraction
    j: int
    n_max: int
    ell: str
    backend: str
    format: str
    z_tol: float
    output: str | None

    @property
    def ells(self) -> tuple[int, ...]:
        return (-1, 1) if self.ell == "both" else (int(self.ell),)

    def context(self) -> QContext:
        return QContext(self.q, self.a, self.lam, self.mu, j=self.j, backend=self.backend, approx_tolerance=self.z_tol)


def nmax_cap() -> int:
    raw = os.environ.get("QSOBOLEV_NMAX_CAP")
    if raw is None:
        return DEFAULT_NMAX_CAP
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"QSOBOLEV_NMAX_CAP must be an integer, got {raw!r}") from exc


def _check_n(n: int, what: str) -> int:
    cap = nmax_cap()
    if n < 0:
        raise ConfigError(f"{what} must be non-negative")
    if n > cap:
        raise ConfigError(f"{what}={n} exceeds the cap {cap} (set QSOBOLEV_NMAX_CAP to raise it)")
    return n


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _config(args) -> CliConfig:
    cfg = CliConfig(
        q=args.q, a=args.a, lam=args.lam, mu=args.mu, j=args.j,
        n_max=_check_n(args.n_max, "n_max"), ell=args.ell, backend=args.backend,
        format=args.format, z_tol=args.z_tol, output=args.output,
    )
    cfg.context()  # validates
    return cfg


# -- rendering ------------------------------------------------------------


def _scalar_text(c) -> str:
    return MP.nstr(c.v, 25) if isinstance(c, RealScalar) else to_text(c)


def _emit(cfg: CliConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _family(cfg: CliConfig, name: str):
    from .sobolev import SobolevFamily

    fam = SobolevFamily(cfg.context())
    return fam.asc if name == "asc" else fam


def _poly_of(fam, n: int) -> Poly:
    # ASC coefficients are plain rationals; embed them in the active backend
    return fam.poly(n).scale(fam.ctx.one)


def _render_poly(cfg: CliConfig, family: str, n: int, p: Poly) -> str:
    if cfg.format == "json":
        doc = {"context": cfg.context().describe(), "family": family, "n": n, "coefficients": poly_to_json(p)}
        return json.dumps(doc, ensure_ascii=False) + "\n"
    if cfg.format == "csv":
        return _csv([(k, _scalar_text(c)) for k, c in enumerate(p.coeffs)], ("power", "coefficient"))
    return poly_str(p) + "\n"


# -- commands -------------------------------------------------------------


def cmd_poly(cfg: CliConfig, family: str, n: int) -> int:
    _check_n(n, "n")
    fam = _family(cfg, family)
    _emit(cfg, _render_poly(cfg, family, n, _poly_of(fam, n)))
    return EXIT_OK


def cmd_table(cfg: CliConfig, family: str) -> int:
    fam = _family(cfg, family)
    polys = [_poly_of(fam, n) for n in range(cfg.n_max + 1)]
    if cfg.format == "json":
        doc = {
            "context": cfg.context().describe(),
            "family": family,
            "polynomials": [{"n": n, "coefficients": poly_to_json(p)} for n, p in enumerate(polys)],
        }
        _emit(cfg, json.dumps(doc, ensure_ascii=False) + "\n")
    elif cfg.format == "csv":
        rows = [(n, k, _scalar_text(c)) for n, p in enumerate(polys) for k, c in enumerate(p.coeffs)]
        _emit(cfg, _csv(rows, ("n", "power", "coefficient")))
    else:
        _emit(cfg, "".join(f"{n}: {poly_str(p)}\n" for n, p in enumerate(polys)))
    return EXIT_OK


def cmd_verify(cfg: CliConfig, fault: str | None = None, workers: int = 1) -> int:
    from .verify import first_failure, run_suite, suite_passed

    if cfg.backend != "exact":
        raise ConfigError("verify needs the exact backend")
    reports = run_suite(cfg.context(), cfg.n_max, cfg.ells, fault=fault, workers=workers)
    ok = suite_passed(reports)
    if cfg.format == "json":
        doc = {"context": cfg.context().describe(), "passed": ok, "reports": [r.to_dict() for r in reports]}
        _emit(cfg, json.dumps(doc, ensure_ascii=False) + "\n")
    elif cfg.format == "csv":
        rows = [
            (r.identity, r.n, "" if r.ell is None else r.ell, r.detail, r.kind, "pass" if r.passed else "fail", r.witness or "")
            for r in reports
        ]
        _emit(cfg, _csv(rows, ("identity", "n", "ell", "detail", "kind", "result", "witness")))
    else:
        lines = []
        for r in reports:
            status = "ok" if r.passed else ("INFO" if r.kind == "info" else "FAIL")
            ell = "" if r.ell is None else f" ell={r.ell}"
            det = f" {r.detail}" if r.detail else ""
            tail = f"  {r.witness}" if r.witness and not r.passed else ""
            lines.append(f"{status:4} [{r.kind}] {r.identity} n={r.n}{ell}{det}{tail}")
        bad = first_failure(reports)
        summary = "all binding identities hold" if ok else f"failure: {bad.identity} n={bad.n} ell={bad.ell}"
        lines.append(f"{len(reports)} checks, {summary}")
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_plot_data(cfg: CliConfig, n_list: list[int], points: int) -> int:
    from .sampling import sample_family
    from .sobolev import SobolevFamily

    for n in n_list:
        _check_n(n, "n")
    if points < 2:
        raise ConfigError("grid needs at least 2 points")
    fam = SobolevFamily(cfg.context())
    rows = sample_family(fam, n_list, points)
    if cfg.format == "json":
        doc = {
            "context": cfg.context().describe(),
            "samples": [{"x": MP.nstr(x, 20), "n": n, "value": MP.nstr(v, 20)} for x, n, v in rows],
        }
        _emit(cfg, json.dumps(doc) + "\n")
    else:
        _emit(cfg, _csv([(MP.nstr(x, 20), n, MP.nstr(v, 20)) for x, n, v in rows], ("x", "n", "value")))
    return EXIT_OK


def cmd_jfrac(cfg: CliConfig) -> int:
    from . import jfrac
    from .sobolev import SobolevFamily

    if cfg.backend != "exact":
        raise ConfigError("jfrac needs the exact backend")
    fam = SobolevFamily(cfg.context())
    records, closed = [], []
    for ell in cfg.ells:
        records += jfrac.convergent_table(fam, ell, cfg.n_max)
        jc = jfrac.jfraction_coeffs(fam, ell, cfg.n_max + 1)
        for n in range(1, cfg.n_max + 1):
            c = jfrac.closed_sum_probe(fam, ell, n, jc)
            closed.append({"n": n, "ell": ell, "agree": c.agree, "ratio": str(c.ratio), "closed_sum": str(c.closed_sum)})
    ok = all(r["equal"] for r in records)
    if cfg.format == "json":
        doc = {"context": cfg.context().describe(), "convergents": records, "closed_sum": closed}
        _emit(cfg, json.dumps(doc, ensure_ascii=False) + "\n")
    elif cfg.format == "csv":
        rows = [(r["n"], r["ell"], r["form"], r["equal"]) for r in records]
        _emit(cfg, _csv(rows, ("n", "ell", "form", "equal")))
    else:
        lines = [f"n={r['n']} ell={r['ell']} {r['form']}: {'equal' if r['equal'] else 'DIFFERENT'}" for r in records]
        lines += [f"closed-sum ratio n={c['n']} ell={c['ell']}: {'agrees' if c['agree'] else 'differs'}" for c in closed]
        _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


# -- parser ---------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=_rational, default=Fraction(1, 2), help="base q as 'p/q' (default 1/2)")
    p.add_argument("--a", type=_rational, default=Fraction(-1), help="parameter a < 0 (default -1)")
    p.add_argument("--lam", "--lambda", dest="lam", type=_rational, default=Fraction(1))
    p.add_argument("--mu", type=_rational, default=Fraction(1))
    p.add_argument("--j", type=int, default=2, help="derivative order in the discrete part")
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--ell", choices=("-1", "1", "both"), default="both")
    p.add_argument("--backend", choices=("exact", "approx"), default="exact")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--z-tol", type=float, default=1e-45, help="tail tolerance for numeric Z (approx backend)")
    p.add_argument("--output", "-o", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsobolev", description="Al-Salam--Carlitz I Sobolev-type polynomials")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("poly", help="print one polynomial")
    _common(p)
    p.add_argument("--family", choices=("asc", "sobolev"), default="sobolev")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("verify", help="run the identity suite")
    _common(p)
    p.add_argument("--inject-fault", metavar="NAME", help="perturb one coefficient by +1 (debugging aid)")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("plot-data", help="sample UU_n on a grid over [a, 1]")
    _common(p)
    p.add_argument("--n-list", default="0,1,2,3,4,5")
    p.add_argument("--grid-points", type=int, default=201)

    p = sub.add_parser("jfrac", help="J-fraction convergent table")
    _common(p)

    p = sub.add_parser("table", help="coefficients of n = 0..n_max")
    _common(p)
    p.add_argument("--family", choices=("asc", "sobolev"), default="sobolev")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = _config(args)
        if args.command == "poly":
            return cmd_poly(cfg, args.family, args.n)
        if args.command == "table":
            return cmd_table(cfg, args.family)
        if args.command == "verify":
            return cmd_verify(cfg, args.inject_fault, args.workers)
        if args.command == "plot-data":
            try:
                n_list = [int(t) for t in args.n_list.split(",") if t.strip()]
            except ValueError as exc:
                raise ConfigError(f"bad --n-list {args.n_list!r}") from exc
            return cmd_plot_data(cfg, n_list, args.grid_points)
        return cmd_jfrac(cfg)
    except (ConfigError, InvalidContext, ValueError) as exc:
        print(f"qsobolev: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularGram, DegenerateConnection) as exc:
        print(f"qsobolev: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except QSobolevError as exc:
        print(f"qsobolev: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
