"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end, so
that each class of failure maps to a distinct, documented process status.
"""

from __future__ import annotations


class ADBError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


# -- approximation / arithmetic ---------------------------------------------

class EmptyInput(ADBError, ValueError):
    exit_code = 3


class ZeroRadiusSide(ADBError, ValueError):
    """Inverse degree requested on a side whose radius is zero."""

    exit_code = 3


class DegenerateNodes(ADBError, ValueError):
    exit_code = 4


# -- grid / model construction ----------------------------------------------

class GridError(ADBError, ValueError):
    """Grid data violates the regular-grid invariants."""

    exit_code = 4


class IncompleteGrid(GridError):
    pass


class DuplicatePoint(GridError):
    pass


class InconsistentDimension(GridError):
    pass


class InvalidRadii(ADBError, ValueError):
    exit_code = 4


class IndexOutOfRange(ADBError, IndexError):
    exit_code = 4


class OutOfDomain(ADBError, ValueError):
    """Query lies outside the bounding box of the grid."""

    exit_code = 5


# -- file formats -----------------------------------------------------------

class ParseError(ADBError, ValueError):
    exit_code = 3

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.column = column


class DimensionMismatch(ParseError):
    pass


class EmptyFile(ParseError):
    pass


class CorruptFile(ADBError, ValueError):
    exit_code = 6


class SchemaVersionMismatch(CorruptFile):
    pass


# -- front end --------------------------------------------------------------

class UnknownFunction(ADBError, KeyError):
    exit_code = 7

    def __str__(self) -> str:  # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""


class UnsupportedDimension(ADBError, ValueError):
    exit_code = 8


class NondeterministicResult(ADBError, RuntimeError):
    """Parallel and sequential evaluation disagreed."""

    exit_code = 9


class ToleranceExceeded(ADBError):
    """An evaluation report exceeded the requested error tolerance."""

    exit_code = 10


class UsageError(ADBError):
    """Flags that are individually valid but cannot be combined."""

    exit_code = 2
