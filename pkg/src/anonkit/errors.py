"""Exception hierarchy shared by every anonkit module."""

from __future__ import annotations


class AnonkitError(Exception):
    """Base class for all errors raised by anonkit."""


class UnknownColumn(AnonkitError, KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown column: {name!r}")

    def __str__(self) -> str:
        return self.args[0]


class KindMismatch(AnonkitError, TypeError):
    pass


class ParseError(AnonkitError, ValueError):
    def __init__(self, row: int, column: str, cell: str, expected: str):
        self.row = row
        self.column = column
        self.cell = cell
        super().__init__(
            f"row {row}, column {column!r}: cannot parse {cell!r} as {expected}"
        )


class SchemaMismatch(AnonkitError, ValueError):
    pass


class ConfigError(AnonkitError, ValueError):
    """Invalid pipeline configuration.

    ``path`` is a JSON-pointer-style location of the offending field,
    e.g. ``/columns/3/params/sigma``.
    """

    def __init__(self, path: str, message: str):
        self.path = path or "/"
        self.message = message
        super().__init__(f"{self.path}: {message}")


class HierarchyError(AnonkitError, ValueError):
    pass


class UncoveredValue(AnonkitError, ValueError):
    def __init__(self, value: object):
        self.value = value
        super().__init__(f"value {value!r} is not covered by any group")


class UnknownValue(AnonkitError, ValueError):
    def __init__(self, value: object):
        self.value = value
        super().__init__(f"value {value!r} is not in the hierarchy domain")


class LevelOutOfRange(AnonkitError, ValueError):
    pass


class InvalidLength(AnonkitError, ValueError):
    pass


class InfeasibleK(AnonkitError):
    pass


class EmptyDataset(AnonkitError, ValueError):
    pass


class NegativeEntropy(AnonkitError, ValueError):
    pass
