"""Exception hierarchy shared by every fracverify module."""


class FracVerifyError(Exception):
    """Base class for all errors raised by fracverify."""


class DomainError(FracVerifyError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class PoleError(DomainError):
    """The gamma function was asked for a value at one of its poles."""


class NonConvergenceError(FracVerifyError, ArithmeticError):
    """A limit, extrapolation or refinement sequence failed to settle."""


class StepSizeError(NonConvergenceError):
    """Halving an integration step moved the result beyond tolerance."""


class TruncationOrderError(FracVerifyError, ValueError):
    """More exact derivatives were requested than a function provides."""
