"""Fixed parameters of a computation and the constants derived from them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Literal

from .errors import InvalidContext
from .scalar import MP, RealScalar, ZRat

Backend = Literal["exact", "approx"]


@dataclass(frozen=True)
class QContext:
    """Parameters ``(q, a, lambda, mu, j)`` plus the scalar backend.

    ``0 < q < 1``, ``a < 0``, ``lam, mu >= 0`` and ``j >= 1`` are enforced.
    With ``backend="approx"`` the formal ``Z`` is replaced by the numeric
    value of (q, a, q/a; q)_inf computed to ``approx_tolerance``.
    """

    q: Fraction
    a: Fraction
    lam: Fraction = Fraction(1)
    mu: Fraction = Fraction(1)
    j: int = 2
    backend: Backend = "exact"
    approx_tolerance: float = 1e-45

    def __post_init__(self):
        for name in ("q", "a", "lam", "mu"):
            value = getattr(self, name)
            if isinstance(value, float):
                raise InvalidContext(f"{name} must be an exact rational, got float {value!r}")
            object.__setattr__(self, name, Fraction(value))
        if not 0 < self.q < 1:
            raise InvalidContext(f"need 0 < q < 1, got q={self.q}")
        if not self.a < 0:
            raise InvalidContext(f"need a < 0, got a={self.a}")
        if self.lam < 0 or self.mu < 0:
            raise InvalidContext("lambda and mu must be non-negative")
        if not isinstance(self.j, int) or self.j < 1:
            raise InvalidContext(f"need integer j >= 1, got j={self.j!r}")
        if self.backend not in ("exact", "approx"):
            raise InvalidContext(f"unknown backend {self.backend!r}")
        if not self.approx_tolerance > 0:
            raise InvalidContext("approx_tolerance must be positive")

    @property
    def exact(self) -> bool:
        return self.backend == "exact"

    def const(self, value):
        """Embed a rational constant into the active backend."""
        if self.exact:
            return ZRat.const(value)
        return RealScalar(Fraction(value))

    @cached_property
    def zero(self):
        return self.const(0)

    @cached_property
    def one(self):
        return self.const(1)

    @cached_property
    def z_numeric(self):
        """Numeric value of (q, a, q/a; q)_inf as an mpmath mpf."""
        from .qcore import q_pochhammer_inf

        tol = self.approx_tolerance
        return (
            q_pochhammer_inf(self, self.q, tol)
            * q_pochhammer_inf(self, self.a, tol)
            * q_pochhammer_inf(self, self.q / self.a, tol)
        )

    @cached_property
    def Z(self):
        """The generator: formal ``Z`` (exact) or its numeric value (approx)."""
        if self.exact:
            return ZRat.gen()
        return RealScalar(self.z_numeric)

    def with_params(self, **changes) -> "QContext":
        from dataclasses import replace

        return replace(self, **changes)

    def describe(self) -> dict:
        return {
            "q": str(self.q),
            "a": str(self.a),
            "lambda": str(self.lam),
            "mu": str(self.mu),
            "j": self.j,
            "backend": self.backend,
        }


def mpf_of(value):
    if isinstance(value, Fraction):
        return MP.mpf(value.numerator) / value.denominator
    if isinstance(value, RealScalar):
        return value.v
    return MP.mpf(value)
