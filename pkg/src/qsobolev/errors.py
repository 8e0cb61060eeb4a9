"""Exception hierarchy shared by every module of the package."""


class QSobolevError(Exception):
    """Base class for all errors raised by :mod:`qsobolev`."""


class BackendMismatch(QSobolevError, TypeError):
    """Exact and approximate scalars were combined in one operation."""


class DivisionByZero(QSobolevError, ZeroDivisionError):
    pass


class PoleAtZ(QSobolevError, ZeroDivisionError):
    """An exact scalar was evaluated at a root of its denominator."""


class InvalidContext(QSobolevError, ValueError):
    pass


class IndexOutOfRange(QSobolevError, ValueError):
    pass


class ToleranceNotPositive(QSobolevError, ValueError):
    pass


class ExactDivisionFailed(QSobolevError, ArithmeticError):
    """A polynomial division that must be exact left a remainder."""


class SingularGram(QSobolevError, ArithmeticError):
    pass


class DegenerateConnection(QSobolevError, ArithmeticError):
    """det(B_n) vanishes identically, so the inverse connection is undefined."""


class DegenerateXi(QSobolevError, ArithmeticError):
    pass


class DegenerateTTRR(QSobolevError, ArithmeticError):
    pass


class UndefinedAuxiliary(QSobolevError, ArithmeticError):
    """psi_n / vartheta_n (or a 3phi2 factor) is undefined at the sample point."""


class ZeroTailDenominator(QSobolevError, ZeroDivisionError):
    pass
