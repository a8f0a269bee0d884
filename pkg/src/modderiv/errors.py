"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class ModDerivError(Exception):
    """Base class for library errors."""


class DomainError(ModDerivError, ValueError):
    """Argument lies outside the declared domain of a function."""


class EvalError(ModDerivError, ArithmeticError):
    """Expression evaluation hit an undefined operation (log of a non-positive
    number, division by zero, fractional power of a negative base, ...)."""


class ParseError(ModDerivError, ValueError):
    """Malformed expression text."""

    def __init__(self, message: str, position: int, expected: frozenset[str] = frozenset()):
        self.position = position
        self.expected = frozenset(expected)
        detail = f"{message} at position {position}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class FormatError(ModDerivError, ValueError):
    """Malformed sample data."""


class RangeError(ModDerivError, ValueError):
    """Construction parameter outside its supported range."""


class DivisionGuard(ModDerivError, ZeroDivisionError):
    """A modulus evaluated to zero where a quotient by it was required."""


class DegenerateModulus(ModDerivError, ValueError):
    """The point oscillation vanishes identically, so it cannot be normalized."""


class ConsistencyError(ModDerivError, RuntimeError):
    """An internal invariant (e.g. majorization of the increment by the point
    oscillation) was violated."""
