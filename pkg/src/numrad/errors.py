"""Exception hierarchy shared by every numrad module."""


class NumradError(Exception):
    """Base class for all errors raised by numrad."""


class DimensionError(NumradError, ValueError):
    """Operand shapes are wrong: not square, not conformable, or too large."""


class NotFiniteError(NumradError, ValueError):
    """A matrix or vector contains NaN or infinite entries."""


class NotInvertibleError(NumradError, ValueError):
    """Matrix is singular at the invertibility tolerance."""


class ConvergenceError(NumradError, ArithmeticError):
    """An iterative solver stopped before reaching its tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class HypothesisError(NumradError, ValueError):
    """A check was called on an input that violates its stated precondition."""


class InequalityViolation(NumradError, AssertionError):
    """An unconditional inequality failed; almost certainly an implementation bug.

    ``matrix`` holds the offending operand (or pair) so it can be serialized.
    """

    def __init__(self, message, matrix=None, verdict=None):
        super().__init__(message)
        self.matrix = matrix
        self.verdict = verdict
