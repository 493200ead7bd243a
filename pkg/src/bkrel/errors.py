"""Exception hierarchy shared by every bkrel module."""

from __future__ import annotations


class BKRelError(Exception):
    """Base class for all library errors."""


class LatticeMismatchError(BKRelError):
    """Operands are bound to different truth-value lattices."""


class UnsupportedLatticeError(BKRelError):
    """The operation is not defined for this kind of lattice."""


class LatticeAxiomError(BKRelError):
    """A table-defined lattice violates the residuated-lattice axioms."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class WiringError(BKRelError):
    """Relations are composed or compared over incompatible domains."""


class NotCrispError(BKRelError):
    """A crisp (0/1-valued) relation was required."""


class ExprSyntaxError(BKRelError):
    """The expression text does not match the grammar."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class NonAssociativeChainError(ExprSyntaxError):
    """A non-associative operator was chained without parentheses."""


class UnboundNameError(BKRelError):
    """An expression refers to a relation that is not loaded."""
