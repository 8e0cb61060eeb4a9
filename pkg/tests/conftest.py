from fractions import Fraction

import pytest

from qsobolev.context import QContext
from qsobolev.sobolev import SobolevFamily

PARAM_SETS = {
    "half": (Fraction(1, 2), Fraction(-1), Fraction(1), Fraction(1)),
    "third": (Fraction(1, 3), Fraction(-2), Fraction(1, 2), Fraction(2)),
}

_FAMILIES: dict = {}


def family(name: str = "half", j: int = 2, **changes) -> SobolevFamily:
    """Shared families; their caches are append-only, so reuse across tests is safe."""
    q, a, lam, mu = PARAM_SETS[name]
    key = (name, j, tuple(sorted(changes.items())))
    if key not in _FAMILIES:
        ctx = QContext(q, a, lam, mu, j=j).with_params(**changes)
        _FAMILIES[key] = SobolevFamily(ctx)
    return _FAMILIES[key]


@pytest.fixture
def half_ctx():
    return QContext(*PARAM_SETS["half"], j=2)


@pytest.fixture
def third_ctx():
    return QContext(*PARAM_SETS["third"], j=2)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
