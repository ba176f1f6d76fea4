"""Exception hierarchy shared by every module of the package."""


class IcubeError(Exception):
    """Base class for all errors raised by :mod:`icubes`."""


class ZeroInput(IcubeError, ValueError):
    pass


class DivisibilityViolation(IcubeError, ValueError):
    pass


class BothZero(IcubeError, ValueError):
    pass


class NonDivisor(IcubeError, ValueError):
    pass


class Unsupported(IcubeError, NotImplementedError):
    pass


class NotOrthobalanced(IcubeError, ValueError):
    pass


class NormMismatch(IcubeError, ValueError):
    pass


class NonIntegralResult(IcubeError, ArithmeticError):
    pass


class NonIntegralDelta(IcubeError, ValueError):
    pass


class NonSquareDet(IcubeError, ValueError):
    pass


class IntegralityViolation(IcubeError, ArithmeticError):
    """An integrality guarantee failed; this always indicates a bug upstream."""


class NotIcube(IcubeError, ValueError):
    """Raised by :func:`icubes.icube.verify`; carries the offending column pair."""

    def __init__(self, message, i=None, j=None):
        super().__init__(message)
        self.i = i
        self.j = j


class NotOrthogonal(NotIcube):
    pass


class UnequalNorms(NotIcube):
    pass


class ZeroColumn(NotIcube):
    pass


class PreconditionFailed(IcubeError, ValueError):
    pass


class NotPrimitive(PreconditionFailed):
    pass


class NormNotAbsoluteSquare(PreconditionFailed):
    pass


class HypothesisViolated(PreconditionFailed):
    pass


class BudgetExceeded(IcubeError, RuntimeError):
    pass


class NonSplitPrime(IcubeError, ValueError):
    pass
