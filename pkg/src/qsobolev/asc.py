"""The classical Al-Salam--Carlitz I family U_n^{(a)}(x; q).

Norms are kept as ``Z * h_n`` with ``h_n`` rational, so every kernel is a
polynomial in (x, y) over Q(Z).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .context import QContext
from .errors import ExactDivisionFailed, IndexOutOfRange
from .qcore import boxminus_pow, qfact, qfalling, qnum, qpoch
from .qpoly import Poly, RatFunX, q_derivative, q_derivative_iter, q_taylor_polynomial


class BiPoly:
    """Polynomial in (x, y) stored as a Poly in x whose coefficients are Polys in y."""

    __slots__ = ("rows",)

    def __init__(self, rows=()):
        rows = list(rows)
        while rows and not rows[-1]:
            rows.pop()
        self.rows = tuple(rows)

    @classmethod
    def outer(cls, px: Poly, py: Poly) -> "BiPoly":
        """px(x) * py(y)."""
        return cls(py.scale(c) if c else Poly() for c in px.coeffs)

    def __bool__(self):
        return bool(self.rows)

    def __add__(self, other: "BiPoly") -> "BiPoly":
        a, b = self.rows, other.rows
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, r in enumerate(b):
            out[i] = out[i] + r
        return BiPoly(out)

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "BiPoly":
        return BiPoly(r.scale(c) for r in self.rows)

    def __eq__(self, other):
        return isinstance(other, BiPoly) and self.rows == other.rows

    def swap(self) -> "BiPoly":
        """K(y, x)."""
        width = max((len(r) for r in self.rows), default=0)
        return BiPoly(Poly(r[i] for r in self.rows) for i in range(width))

    def eval_y(self, y0) -> Poly:
        return Poly(r(y0) for r in self.rows)

    def eval_x(self, x0) -> Poly:
        acc = Poly()
        for r in reversed(self.rows):
            acc = acc.scale(x0) + r
        return acc

    def q_derivative_x(self, ctx, ell: int = 1) -> "BiPoly":
        return self.swap().q_derivative_y(ctx, ell).swap()

    def q_derivative_y(self, ctx, ell: int = 1) -> "BiPoly":
        return BiPoly(q_derivative(ctx, r, ell) for r in self.rows)

    def div_x_minus_y(self) -> "BiPoly":
        """Exact division by (x - y), treating y-polynomials as coefficients."""
        rows = list(self.rows)
        if not rows:
            return self
        y = Poly.x()
        n = len(rows) - 1
        out = [Poly()] * n
        carry = Poly()
        # synthetic division by the monic (x - y): b_{i-1} = r_i + y b_i
        for i in range(n, 0, -1):
            carry = rows[i] + y * carry
            out[i - 1] = carry
        if rows[0] + y * carry:
            raise ExactDivisionFailed("kernel numerator is not divisible by (x - y)")
        return BiPoly(out)


@dataclass(frozen=True)
class ASCRecurrenceCoeffs:
    beta_n: object
    gamma_n: object


@dataclass(frozen=True)
class ASCStructureCoeffs:
    sigma: Poly
    alpha_bar_n: object
    beta_bar_n: object
    gamma_bar_n: object


@dataclass(frozen=True)
class ASCEquationData:
    tau: Poly
    lambda_nq: object


class ASCFamily:
    """Cached monic U_n with reduced norms h_n (||U_n||^2 = Z h_n).

    U_n has rational coefficients; ``Z`` only enters through the norms.

    The cache is append-only and guarded by a lock, so concurrent readers are
    safe.
    """

    def __init__(self, ctx: QContext):
        self.ctx = ctx
        self._polys: list[Poly] = [Poly.const(1)]
        self._lock = threading.Lock()
        self._dcache: dict = {}

    # -- recurrence data
    def beta(self, n: int) -> Fraction:
        return (self.ctx.a + 1) * self.ctx.q**n

    def gamma(self, n: int) -> Fraction:
        q, a = self.ctx.q, self.ctx.a
        return -a * q ** (n - 1) * (1 - q**n)

    def recurrence_coeffs(self, n: int) -> ASCRecurrenceCoeffs:
        return ASCRecurrenceCoeffs(self.ctx.const(self.beta(n)), self.ctx.const(self.gamma(n)))

    def sigma(self) -> Poly:
        a = self.ctx.a
        return Poly((a, -(a + 1), 1))

    def alpha_bar(self, n: int) -> Fraction:
        q = self.ctx.q
        return q ** (1 - n) * qnum(q, n)

    def beta_bar(self, n: int) -> Fraction:
        q = self.ctx.q
        return (self.ctx.a + 1) * q * qnum(q, n)

    def gamma_bar(self, n: int) -> Fraction:
        q = self.ctx.q
        return self.ctx.a * q**n * qnum(q, n)

    def structure_coeffs(self, n: int) -> ASCStructureCoeffs:
        c = self.ctx.const
        return ASCStructureCoeffs(
            self.sigma(), c(self.alpha_bar(n)), c(self.beta_bar(n)), c(self.gamma_bar(n))
        )

    def equation_data(self, n: int) -> ASCEquationData:
        q, a = self.ctx.q, self.ctx.a
        tau = Poly((-(a + 1) / (1 - q), 1 / (1 - q)))
        lam = qnum(q, n) * (qnum(q, 1 - n) - 1 / (1 - q))
        return ASCEquationData(tau, self.ctx.const(lam))

    # -- polynomials
    def poly(self, n: int) -> Poly:
        """U_n from x U_n = U_{n+1} + beta_n U_n + gamma_n U_{n-1}."""
        if n < 0:
            return Poly()
        polys = self._polys
        if n < len(polys):
            return polys[n]
        with self._lock:
            while len(polys) <= n:
                k = len(polys) - 1
                prev = polys[k - 1] if k >= 1 else Poly()
                nxt = polys[k].mul_x() - polys[k].scale(self.beta(k)) - prev.scale(self.gamma(k))
                polys.append(nxt)
        return polys[n]

    def poly_hypergeometric(self, n: int) -> Poly:
        """U_n = (-a)^n q^C(n,2) 2phi1(q^-n, 1/x; 0; q, qx/a), terminating at k = n.

        x^k (1/x; q)_k is expanded as prod_{i<k} (x - q^i).
        """
        q, a = self.ctx.q, self.ctx.a
        total = Poly()
        for k in range(n + 1):
            c = qpoch(q ** (-n), q, k) / qpoch(q, q, k) * (q / a) ** k
            total = total + boxminus_pow(self.ctx, Fraction(1), k).scale(c)
        return total.scale((-a) ** n * q ** comb(n, 2))

    def reduced_norm(self, n: int) -> Fraction:
        """h_n with ||U_n||^2 = Z h_n."""
        q, a = self.ctx.q, self.ctx.a
        return (-a) ** n * (1 - q) * qpoch(q, q, n) * q ** comb(n, 2)

    def norm(self, n: int):
        return self.ctx.Z * self.reduced_norm(n)

    def derivative(self, n: int, k: int) -> Poly:
        """D_q^k U_n (cached)."""
        key = (n, k)
        hit = self._dcache.get(key)
        if hit is None:
            hit = q_derivative_iter(self.ctx, self.poly(n), 1, k)
            self._dcache[key] = hit
        return hit

    # -- classical identities
    def forward_shift(self, n: int, k: int) -> Poly:
        """Right-hand side [n]_q^{(k)} U_{n-k} of D_q^k U_n."""
        if not 0 <= k <= n:
            raise IndexOutOfRange(f"need 0 <= k <= n, got n={n}, k={k}")
        return self.poly(n - k).scale(qfalling(self.ctx.q, n, k))

    def structure_residual(self, n: int) -> Poly:
        ctx = self.ctx
        lhs = self.sigma() * q_derivative(ctx, self.poly(n), -1)
        rhs = (
            self.poly(n + 1).scale(self.alpha_bar(n))
            + self.poly(n).scale(self.beta_bar(n))
            + self.poly(n - 1).scale(self.gamma_bar(n))
        )
        return lhs - rhs

    def recurrence_residual(self, n: int) -> Poly:
        u = self.poly
        return u(n).mul_x() - u(n + 1) - u(n).scale(self.beta(n)) - u(n - 1).scale(self.gamma(n))

    def second_order_residual(self, n: int) -> Poly:
        """sigma D_q D_{1/q} U_n + tau D_q U_n + lambda_{n,q} U_n."""
        ctx = self.ctx
        u = self.poly(n)
        data = self.equation_data(n)
        dd = q_derivative(ctx, q_derivative(ctx, u, -1), 1)
        return self.sigma() * dd + data.tau * q_derivative(ctx, u, 1) + u.scale(data.lambda_nq)

    # -- kernels
    def kernel_sum(self, n: int, i: int = 0, jp: int = 0) -> BiPoly:
        """sum_{k<=n} D^i U_k(x) D^jp U_k(y) / (Z h_k)."""
        total = BiPoly()
        for k in range(n + 1):
            dx, dy = self.derivative(k, i), self.derivative(k, jp)
            if dx and dy:
                total = total + BiPoly.outer(dx, dy.scale(1 / self.norm(k)))
        return total

    def cd_kernel(self, n: int) -> BiPoly:
        """Christoffel--Darboux quotient form of K_n(x, y)."""
        u1, u0 = self.poly(n + 1), self.poly(n)
        top = BiPoly.outer(u1, u0) - BiPoly.outer(u0, u1)
        return top.div_x_minus_y().scale(1 / self.norm(n))

    def kernel_partial(self, n: int, i: int, jp: int) -> BiPoly:
        return self.kernel_sum(n, i, jp)

    def kernel_eval_y(self, n: int, jp: int, y0) -> Poly:
        """K_n^{(0,jp)}(x, y0) as a polynomial in x."""
        total = Poly()
        for k in range(n + 1):
            dy = self.derivative(k, jp)
            if dy:
                c = dy(y0)
                if c:
                    total = total + self.poly(k).scale(c / self.norm(k))
        return total

    def kernel_eval_xy(self, n: int, i: int, jp: int, x0, y0):
        total = self.ctx.zero
        for k in range(n + 1):
            dx, dy = self.derivative(k, i), self.derivative(k, jp)
            if dx and dy:
                total = total + dx(x0) * dy(y0) / self.norm(k)
        return total

    def kernel_ab_coeffs(self, n: int, y0, j: int | None = None) -> tuple[RatFunX, RatFunX]:
        """Rational coefficients A_n(x, y0), B_n(x, y0) of the K^{(0,j)} splitting.

        K_{n-1}^{(0,j)}(x, y0) = A_n U_n(x) + B_n U_{n-1}(x), each coefficient
        being [j]_q!/(Z h_{n-1} (x [-]_q y0)^{j+1}) times a q-Taylor polynomial.
        """
        if n < 1:
            raise IndexOutOfRange("kernel splitting needs n >= 1")
        ctx = self.ctx
        j = ctx.j if j is None else j
        den = boxminus_pow(ctx, y0, j + 1)
        scale = qfact(ctx.q, j) / self.norm(n - 1)
        ta = q_taylor_polynomial(ctx, self.poly(n - 1), y0, j).scale(scale)
        tb = q_taylor_polynomial(ctx, self.poly(n), y0, j).scale(-scale)
        return RatFunX(ta, den), RatFunX(tb, den)
