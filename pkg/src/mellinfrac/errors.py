"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class MellinError(Exception):
    """Base class for all errors raised by :mod:`mellinfrac`."""


class DomainError(MellinError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class NonConvergent(MellinError, ArithmeticError):
    """Adaptive refinement did not stabilize within its budget."""


class TailError(MellinError, ArithmeticError):
    """A truncated spectral window still carries non-negligible mass at its edge."""


class Divergent(MellinError, ArithmeticError):
    """A weakly singular integral grows without stabilizing.

    ``evidence`` carries the refinement trace that led to the verdict.
    """

    def __init__(self, message: str, evidence: object = None) -> None:
        super().__init__(message)
        self.evidence = evidence


class TruncationError(MellinError, ArithmeticError):
    """A series reached its term budget before its tail decayed."""


class MissingDerivative(MellinError, LookupError):
    """A derivative of the requested order is not available."""
