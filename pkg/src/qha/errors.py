"""Exception hierarchy for the qha package.

Every failure mode that user input can trigger has a dedicated class so
callers (and the CLI) can distinguish bad data from algorithmic limits
from genuine mathematical obstructions.
"""

from __future__ import annotations


class QhaError(Exception):
    """Base class for all package-specific errors."""


class GroupMismatch(QhaError):
    """Operands belong to different abelian groups."""


class BudgetExceeded(QhaError):
    """A configured work budget (rewrite steps, completion passes) ran out."""


class NotRootOfUnityValued(QhaError):
    """A character or cochain value is not a root of unity monomial."""


class NonAbelianParams(QhaError):
    """Cocycle parameters contain a nonzero triple constant where an
    abelian (associator-diagonal) cocycle is required."""


class NotCartan(QhaError):
    """An integer matrix is not a generalized Cartan matrix."""


class NotFiniteType(QhaError):
    """A Cartan matrix is valid but not of finite type."""


class UnsupportedRecursion(QhaError):
    """A root-vector power datum requires a recursion this build does not
    implement (nonzero parameter on a non-simple root outside the
    supported families)."""


class InvalidFactoryParams(QhaError):
    """Factory arguments violate the recipe's arithmetic constraints."""


class UnsupportedType(QhaError):
    """Requested Cartan type is outside the supported set for this
    operation."""


class GammaViolation(QhaError):
    """The chosen cocycle parameters do not solve the congruence system
    attached to the datum, so the coproduct construction is undefined."""


class DimensionMismatch(QhaError):
    """The constructed algebra's basis count disagrees with the predicted
    dimension (rewrite-system integrity alarm)."""

    def __init__(self, found: int, expected: int):
        super().__init__(f"basis count {found} != predicted dimension {expected}")
        self.found = found
        self.expected = expected


class NonInvertibleBeta(QhaError):
    """The antipode's beta element is not invertible, so the requested
    normalization cannot be performed."""


class NotDoubledDatum(QhaError):
    """The datum is not of doubled (E/F-presentable) shape."""


class DoesNotDescend(QhaError):
    """Cocycle parameters do not induce standard-form parameters on the
    requested quotient group."""
