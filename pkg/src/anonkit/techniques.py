"""Per-column anonymization transforms and the pipeline that applies them.

Every transform is a pure function from a column to a new column. Row order
and row count are always preserved; only :func:`suppress_column` changes the
shape of a dataset (by removing a column).
"""

from __future__ import annotations

import enum
import hashlib
import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

from .dataset import AttributeClass, Column, Dataset, Kind, Value
from .errors import (
    ConfigError,
    HierarchyError,
    KindMismatch,
    LevelOutOfRange,
    UncoveredValue,
    UnknownValue,
)
from .rng import SplitMix64, derive_seed

logger = logging.getLogger(__name__)

SUPPRESSED = "*"
EN_DASH = "–"


def format_value(value: Value) -> str:
    """Canonical text of a cell, shared by CSV output and hierarchy lookup."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


# ---------------------------------------------------------------------------
# Hierarchies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Hierarchy:
    """Value generalization hierarchy with levels ``0..height``.

    ``rows[i]`` is the full path of one level-0 value: ``(v, parent, ...,
    "*")``. Level 0 is the identity and the top level maps everything to
    ``"*"``. Construction validates that each level coarsens the previous one.
    """

    rows: tuple[tuple[str, ...], ...]
    _lookup: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows:
            raise HierarchyError("hierarchy has no rows")
        width = len(rows[0])
        if width < 2:
            raise HierarchyError("hierarchy rows need at least two levels (value and '*')")
        lookup: dict[str, tuple[str, ...]] = {}
        first_row: dict[str, int] = {}
        for i, row in enumerate(rows):
            if len(row) != width:
                raise HierarchyError(
                    f"row {i + 1} has {len(row)} levels, row 1 has {width}"
                )
            if any(cell == "" for cell in row):
                raise HierarchyError(f"row {i + 1} contains an empty label")
            if row[-1] != SUPPRESSED:
                raise HierarchyError(
                    f"row {i + 1}: top level must be {SUPPRESSED!r}, got {row[-1]!r}"
                )
            if row[0] in lookup:
                raise HierarchyError(
                    f"duplicate level-0 value {row[0]!r} in rows "
                    f"{first_row[row[0]] + 1} and {i + 1}"
                )
            lookup[row[0]] = row
            first_row[row[0]] = i
        # coarsening: equal labels at level l must stay equal at level l+1
        for level in range(1, width - 1):
            parent_of: dict[str, tuple[str, int]] = {}
            for i, row in enumerate(rows):
                label, parent = row[level], row[level + 1]
                seen = parent_of.setdefault(label, (parent, i))
                if seen[0] != parent:
                    raise HierarchyError(
                        f"rows {seen[1] + 1} and {i + 1} share level-{level} label "
                        f"{label!r} but split at level {level + 1} "
                        f"({seen[0]!r} vs {parent!r})"
                    )
        object.__setattr__(self, "_lookup", lookup)

    @property
    def height(self) -> int:
        """Index of the top (``"*"``) level."""
        return len(self.rows[0]) - 1

    @property
    def domain(self) -> frozenset[str]:
        return frozenset(self._lookup)

    def generalize_value(self, value: Value, level: int) -> Value:
        if value is None:
            return None
        if not 0 <= level <= self.height:
            raise LevelOutOfRange(f"level {level} outside 0..{self.height}")
        path = self._lookup.get(format_value(value))
        if path is None:
            raise UnknownValue(value)
        return value if level == 0 else path[level]


# ---------------------------------------------------------------------------
# Technique parameters
# ---------------------------------------------------------------------------


class Technique(enum.Enum):
    SUPPRESS = "suppress"
    MASK = "mask"
    AGGREGATE = "aggregate"
    GENERALIZE = "generalize"
    PERTURB = "perturb"
    NONE = "none"


class MaskStrategy(enum.Enum):
    DROP = "drop"
    REDACT = "redact"
    PARTIAL = "partial"
    HASH = "hash"


@dataclass(frozen=True)
class NumericBins:
    bin_width: float
    anchor: float = 0

    def __post_init__(self) -> None:
        if not self.bin_width > 0:
            raise ValueError("bin_width must be positive")


@dataclass(frozen=True)
class CategoryGroups:
    groups: Mapping[str, tuple[str, ...]]

    def __post_init__(self) -> None:
        owner: dict[str, str] = {}
        for label, members in self.groups.items():
            for m in members:
                if m in owner and owner[m] != label:
                    raise ValueError(
                        f"value {m!r} belongs to groups {owner[m]!r} and {label!r}"
                    )
                owner[m] = label
        object.__setattr__(self, "_owner", owner)

    def label_of(self, value: str) -> Optional[str]:
        return self._owner.get(value)


AggregationSpec = Union[NumericBins, CategoryGroups]


@dataclass(frozen=True)
class PerturbationParams:
    sigma: float
    seed: int = 0
    clamp: Optional[tuple[float, float]] = None
    round: bool = False

    def __post_init__(self) -> None:
        if not self.sigma >= 0:
            raise ValueError("sigma must be non-negative")
        if self.clamp is not None and self.clamp[0] > self.clamp[1]:
            raise ValueError("clamp lower bound exceeds upper bound")


# ---------------------------------------------------------------------------
# Column transforms
# ---------------------------------------------------------------------------


def suppress_column(dataset: Dataset, name: str) -> Dataset:
    return dataset.drop(name)


def _require_kind(column: Column, *kinds: Kind) -> None:
    if column.kind not in kinds:
        expected = "/".join(k.value for k in kinds)
        raise KindMismatch(
            f"column {column.name!r} is {column.kind.value}, expected {expected}"
        )


def _partial(text: str) -> str:
    for i, ch in enumerate(text):
        if ch in " @.":
            return text[:i] + SUPPRESSED if i else SUPPRESSED
    # no separator: keep a 3-character prefix
    return text[:3] + SUPPRESSED


def _keyed_digest(text: str, salt: int) -> str:
    key = (salt & ((1 << 64) - 1)).to_bytes(8, "big")
    return hashlib.blake2b(text.encode("utf-8"), digest_size=8, key=key).hexdigest()


def mask_identifier(
    column: Column, strategy: MaskStrategy, salt: int = 0
) -> Optional[Column]:
    """Mask a text identifier column.

    ``DROP`` returns ``None``: the caller is expected to remove the column.
    ``REDACT`` replaces every value with ``"*"``. ``PARTIAL`` keeps the
    characters before the first space, ``@`` or ``.`` and replaces the rest
    with ``"*"`` (values without a separator keep their first three
    characters). ``HASH`` replaces each value by a 16-hex-digit BLAKE2b digest
    keyed with ``salt``.
    """
    _require_kind(column, Kind.TEXT)
    strategy = MaskStrategy(strategy)
    if strategy is MaskStrategy.DROP:
        return None
    if strategy is MaskStrategy.REDACT:
        fn = lambda v: SUPPRESSED  # noqa: E731
    elif strategy is MaskStrategy.PARTIAL:
        fn = _partial
    else:
        fn = lambda v: _keyed_digest(v, salt)  # noqa: E731
    return column.with_values(None if v is None else fn(v) for v in column.values)


def _number_text(x: float) -> str:
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def bin_label(value: float, bins: NumericBins) -> str:
    w, anchor = bins.bin_width, bins.anchor
    lo = anchor + math.floor((value - anchor) / w) * w
    hi = lo + w
    return f"[{_number_text(lo)}{EN_DASH}{_number_text(hi)})"


def aggregate_numeric(column: Column, spec: NumericBins) -> Column:
    """Replace numbers by half-open bin labels such as ``[20–30)``."""
    _require_kind(column, Kind.INTEGER, Kind.REAL)
    return column.with_values(
        (None if v is None else bin_label(v, spec) for v in column.values),
        kind=Kind.TEXT,
    )


def aggregate_categorical(column: Column, spec: CategoryGroups) -> Column:
    _require_kind(column, Kind.TEXT)
    out = []
    for v in column.values:
        if v is None:
            out.append(None)
            continue
        label = spec.label_of(v)
        if label is None:
            raise UncoveredValue(v)
        out.append(label)
    return column.with_values(out)


def generalize(column: Column, hierarchy: Hierarchy, level: int) -> Column:
    """Map every value to its ancestor at ``level`` in ``hierarchy``.

    Level 0 returns the column unchanged (including its kind); any other level
    produces a text column.
    """
    if not 0 <= level <= hierarchy.height:
        raise LevelOutOfRange(f"level {level} outside 0..{hierarchy.height}")
    mapped = [hierarchy.generalize_value(v, level) for v in column.values]
    if level == 0:
        return column
    return column.with_values(mapped, kind=Kind.TEXT)


def _round_half_up(x: float) -> float:
    return math.floor(x + 0.5)


def perturb_numeric(column: Column, params: PerturbationParams) -> Column:
    """Add Gaussian noise N(0, sigma^2) to each numeric value.

    Row ``i`` draws its noise from ``SplitMix64(derive_seed(seed, i))`` so the
    result does not depend on any other column or row. Integer columns are
    always rounded (half up); clamping is applied last.
    """
    _require_kind(column, Kind.INTEGER, Kind.REAL)
    is_int = column.kind is Kind.INTEGER
    out: list[Value] = []
    for i, v in enumerate(column.values):
        if v is None:
            out.append(None)
            continue
        x = float(v)
        if params.sigma > 0:
            x += params.sigma * SplitMix64(derive_seed(params.seed, i)).gauss()
        if params.round or is_int:
            x = _round_half_up(x)
        if params.clamp is not None:
            x = min(max(x, params.clamp[0]), params.clamp[1])
        out.append(int(x) if is_int else float(x))
    return column.with_values(out)


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ColumnSpec:
    """Binding of one dataset column to a technique and its parameters.

    ``params`` holds the typed parameter object for the technique:
    ``MaskStrategy`` for mask, ``NumericBins``/``CategoryGroups`` for
    aggregate, the target level (``int``) for generalize,
    ``PerturbationParams`` for perturb, and ``None`` otherwise.
    """

    name: str
    attribute_class: AttributeClass
    kind: Kind
    technique: Technique
    params: object = None
    hierarchy: Optional[Hierarchy] = None
    hierarchy_path: Optional[str] = None


@dataclass(frozen=True)
class PipelineConfig:
    columns: tuple[ColumnSpec, ...]
    seed: Optional[int] = None  # None: not given, caller picks a fallback
    k: int = 5
    max_suppression_fraction: float = 0.05

    def spec(self, name: str) -> ColumnSpec:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.columns]

    @property
    def quasi_identifiers(self) -> list[str]:
        return [
            c.name
            for c in self.columns
            if c.attribute_class is AttributeClass.QUASI_IDENTIFIER
        ]


@dataclass(frozen=True)
class AppliedAction:
    column: str
    technique: str
    params: object
    kept: bool
    note: str = ""


IDENTIFIER_TECHNIQUES = (Technique.SUPPRESS, Technique.MASK)


def column_seed(seed: int, name: str) -> int:
    """Per-column seed, stable under adding or removing other columns."""
    digest = hashlib.blake2b(name.encode("utf-8"), digest_size=8).digest()
    return derive_seed(seed, int.from_bytes(digest, "big"))


def _transform(column: Column, spec: ColumnSpec, seed: int) -> Optional[Column]:
    t = spec.technique
    if t is Technique.NONE:
        return column
    if t is Technique.SUPPRESS:
        return None
    if t is Technique.MASK:
        return mask_identifier(column, spec.params, salt=column_seed(seed, spec.name))
    if t is Technique.AGGREGATE:
        if isinstance(spec.params, NumericBins):
            return aggregate_numeric(column, spec.params)
        return aggregate_categorical(column, spec.params)
    if t is Technique.GENERALIZE:
        return generalize(column, spec.hierarchy, spec.params)
    if t is Technique.PERTURB:
        if column.kind is Kind.TEXT:
            return None
        p = spec.params
        params = PerturbationParams(p.sigma, column_seed(seed, spec.name), p.clamp, p.round)
        return perturb_numeric(column, params)
    raise ValueError(f"unsupported technique {t!r}")


def apply_pipeline(
    dataset: Dataset,
    config: PipelineConfig,
    only: Optional[Union[Technique, str]] = None,
) -> tuple[Dataset, list[AppliedAction]]:
    """Apply every column binding of ``config`` to ``dataset``.

    With ``only`` set, identifier bindings (suppress/mask) always run and other
    bindings run only if their technique equals ``only``; remaining columns
    pass through unchanged, except direct identifiers, which are suppressed
    rather than emitted as-is. Text columns bound to perturb are dropped.

    Returns the transformed dataset and one :class:`AppliedAction` per column,
    in config order.
    """
    names = set(dataset.names)
    missing = [c.name for c in config.columns if c.name not in names]
    uncovered = [n for n in dataset.names if n not in set(config.names)]
    if missing or uncovered:
        raise ConfigError(
            "/columns",
            f"config does not match dataset (missing from data: {missing}, "
            f"not in config: {uncovered})",
        )
    only = Technique(only) if only is not None else None

    out: dict[str, Column] = {}
    actions: list[AppliedAction] = []
    for i, spec in enumerate(config.columns):
        is_identifier = spec.attribute_class is AttributeClass.DIRECT_IDENTIFIER
        if is_identifier and spec.technique is Technique.NONE:
            raise ConfigError(
                f"/columns/{i}/technique",
                f"direct identifier {spec.name!r} cannot be bound to 'none'",
            )
        column = dataset.column(spec.name)
        active = (
            only is None
            or spec.technique in IDENTIFIER_TECHNIQUES
            or spec.technique is only
        )
        if active:
            result = _transform(column, spec, config.seed or 0)
            technique = spec.technique.value
            note = ""
            if result is None and spec.technique is Technique.PERTURB:
                note = "text column cannot be perturbed"
                logger.info("dropping text column %r bound to perturb", spec.name)
        elif is_identifier:
            result, technique, note = None, Technique.SUPPRESS.value, (
                f"identifier bound to {spec.technique.value!r}, not selected"
            )
        else:
            result, technique, note = column, Technique.NONE.value, (
                f"bound to {spec.technique.value!r}, not selected"
            )
        actions.append(
            AppliedAction(spec.name, technique, spec.params if active else None,
                          result is not None, note)
        )
        if result is not None:
            out[spec.name] = result

    cols = tuple(out[n] for n in dataset.names if n in out)
    return Dataset(cols, dataset.row_count), actions
