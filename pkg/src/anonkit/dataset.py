"""Immutable columnar dataset model.

Cell values are plain Python objects: ``str`` for text, ``int`` for integers,
``float`` for reals, and ``None`` for a missing cell. A column holds one kind
of value plus ``None``. Text is compared by exact equality; no case folding or
Unicode normalization is ever applied.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Optional, Sequence, Union

from .errors import KindMismatch, SchemaMismatch, UnknownColumn

Value = Optional[Union[str, int, float]]
MISSING = None


class AttributeClass(enum.Enum):
    DIRECT_IDENTIFIER = "direct_identifier"
    QUASI_IDENTIFIER = "quasi_identifier"
    SENSITIVE = "sensitive"
    INSENSITIVE = "insensitive"


class Kind(enum.Enum):
    TEXT = "text"
    INTEGER = "integer"
    REAL = "real"

    @property
    def is_numeric(self) -> bool:
        return self is not Kind.TEXT


def _check_value(kind: Kind, value: Value) -> None:
    if value is None:
        return
    if kind is Kind.TEXT:
        ok = isinstance(value, str) and value != ""
    elif kind is Kind.INTEGER:
        ok = isinstance(value, int) and not isinstance(value, bool)
    else:
        ok = isinstance(value, float) and math.isfinite(value)
    if not ok:
        raise KindMismatch(f"{value!r} is not a valid {kind.value} value")


@dataclass(frozen=True)
class Column:
    name: str
    attribute_class: AttributeClass
    kind: Kind
    values: tuple[Value, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.values, tuple):
            object.__setattr__(self, "values", tuple(self.values))
        for v in self.values:
            _check_value(self.kind, v)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Value]:
        return iter(self.values)

    @property
    def missing_count(self) -> int:
        return sum(1 for v in self.values if v is None)

    def with_values(self, values: Iterable[Value], kind: Optional[Kind] = None) -> "Column":
        """Copy of this column with new values (and optionally a new kind)."""
        return replace(self, values=tuple(values), kind=kind or self.kind)


@dataclass(frozen=True)
class Dataset:
    columns: tuple[Column, ...] = ()
    row_count: int = 0
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.columns, tuple):
            object.__setattr__(self, "columns", tuple(self.columns))
        if self.row_count < 0:
            raise ValueError("row_count must be non-negative")
        index = {}
        for i, col in enumerate(self.columns):
            if col.name in index:
                raise SchemaMismatch(f"duplicate column name {col.name!r}")
            if len(col.values) != self.row_count:
                raise SchemaMismatch(
                    f"column {col.name!r} has {len(col.values)} values, "
                    f"dataset has {self.row_count} rows"
                )
            index[col.name] = i
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_columns(cls, columns: Sequence[Column]) -> "Dataset":
        n = len(columns[0].values) if columns else 0
        return cls(tuple(columns), n)

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.columns]

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def column(self, name: str) -> Column:
        try:
            return self.columns[self._index[name]]
        except KeyError:
            raise UnknownColumn(name) from None

    def rows(self) -> Iterator[tuple[Value, ...]]:
        return zip(*(c.values for c in self.columns)) if self.columns else iter(())

    def replace_column(self, column: Column) -> "Dataset":
        i = self._index.get(column.name)
        if i is None:
            raise UnknownColumn(column.name)
        cols = list(self.columns)
        cols[i] = column
        return Dataset(tuple(cols), self.row_count)

    def drop(self, name: str) -> "Dataset":
        if name not in self._index:
            raise UnknownColumn(name)
        return Dataset(tuple(c for c in self.columns if c.name != name), self.row_count)

    def select_rows(self, keep: Sequence[int]) -> "Dataset":
        """Dataset restricted to the given row indices, in the given order."""
        cols = tuple(c.with_values(c.values[i] for i in keep) for c in self.columns)
        return Dataset(cols, len(keep))


def column_view(dataset: Dataset, name: str) -> Column:
    return dataset.column(name)


def frequency_distribution(column: Column | Iterable[Value]) -> Counter:
    """Count each distinct non-missing value. Missing cells are not counted."""
    values = column.values if isinstance(column, Column) else column
    return Counter(v for v in values if v is not None)
