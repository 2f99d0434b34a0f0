"""Semantic exception hierarchy shared across the package."""


class MtscError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDistributionError(MtscError, ValueError):
    """A pmf or stochastic kernel violates its contract (negativity, bad normalization)."""


class VariableError(MtscError, ValueError):
    """Unknown, duplicate, colliding, or overlapping variable names."""


class AlphabetMismatchError(MtscError, ValueError):
    """Alphabet sizes of two objects that must agree do not agree."""


class MarkovCheckError(MtscError):
    """A required Markov/factorization condition fails beyond tolerance.

    Carries the offending report in ``.report`` when available.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SupermodularityError(MtscError):
    """A subset-bound set function is not supermodular; ``.pair`` holds a violating (A, B)."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class InfeasibleError(MtscError, ValueError):
    """A requested target is outside the feasible domain (e.g. distortion below its minimum)."""
