"""Exception hierarchy shared by all permbench modules.

``PermbenchError`` is the common base. ``ValidationError`` subclasses map to
CLI exit code 2, ``CapacityExceeded`` to 3 and I/O problems to 4.
"""

from __future__ import annotations


class PermbenchError(Exception):
    """Base class for all library errors."""


class ValidationError(PermbenchError):
    """Malformed or inconsistent input."""


class CapacityExceeded(PermbenchError):
    """An enumeration would exceed a configured capacity cap."""


class IndexOutOfRange(ValidationError):
    pass


class DomainMismatch(ValidationError):
    pass


class MalformedTree(ValidationError):
    pass


class RangeViolation(ValidationError):
    """A strict-binary operation produced a value outside {0, 1}."""


class ShapeMismatch(ValidationError):
    pass


class DegenerateDomain(ValidationError):
    pass


class StepsOutOfRange(ValidationError):
    pass


class PlayerOutOfRange(ValidationError):
    pass


class InsufficientData(ValidationError):
    pass


class InvalidSpec(ValidationError):
    pass


class InvalidConfig(ValidationError):
    pass


class ParseError(ValidationError):
    """Malformed input file; carries a location when one is known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column
