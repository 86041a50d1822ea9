"""Exception hierarchy shared across the package."""
from __future__ import annotations


class TrieffectError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(TrieffectError):
    """Input data violates a structural requirement."""


class NonBinaryColumnError(ValidationError):
    def __init__(self, column: str, value):
        self.column = column
        self.value = value
        super().__init__(f"column {column!r} must contain only 0/1, found {value!r}")


class LengthMismatchError(ValidationError):
    pass


class NonFiniteValueError(ValidationError):
    def __init__(self, column: str):
        self.column = column
        super().__init__(f"column {column!r} contains NaN or infinite values")


class DimensionMismatchError(TrieffectError):
    pass


class RankDeficientError(TrieffectError):
    """Design matrix is not of full column rank.

    ``columns`` names a maximal linearly dependent subset; the caller may
    drop those columns and retry.
    """

    def __init__(self, columns, block: str | None = None):
        self.columns = list(columns)
        self.block = block
        where = f" in block {block!r}" if block else ""
        super().__init__(f"rank-deficient design{where}: dependent columns {self.columns}")


class EmptyCellError(TrieffectError):
    def __init__(self, d: int, m: int):
        self.d = d
        self.m = m
        super().__init__(f"no observations with (D={d}, M={m})")


class TreatedCellMissingError(TrieffectError):
    def __init__(self, m: int | None = None):
        self.m = m
        detail = "no treated observations" if m is None else f"no treated observations with M={m}"
        super().__init__(detail)


class EmptyStratumCellError(TrieffectError):
    def __init__(self, stratum, d: int, m: int | None = None):
        self.stratum = stratum
        self.d = d
        self.m = m
        cell = f"(D={d})" if m is None else f"(D={d}, M={m})"
        super().__init__(f"stratum {stratum} has no observations in cell {cell}")


class BasisError(TrieffectError):
    """Basis specification cannot be parsed or references unknown columns."""


class MissingColumnError(TrieffectError):
    def __init__(self, column: str):
        self.column = column
        super().__init__(f"column {column!r} not found in file header")


class CsvParseError(TrieffectError):
    def __init__(self, line: int, detail: str):
        self.line = line
        super().__init__(f"line {line}: {detail}")


class AllRepsFailedError(TrieffectError):
    pass
