"""k-anonymity: equivalence classes, verification, and greedy global recoding."""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .dataset import AttributeClass, Dataset, Value
from .errors import ConfigError, EmptyDataset, InfeasibleK, UnknownColumn
from .metrics import shannon_entropy
from .techniques import Hierarchy, PipelineConfig, generalize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EquivalenceClass:
    key: tuple[Value, ...]
    rows: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.rows)


def _sort_key(key: tuple[Value, ...]) -> tuple:
    # None sorts first; mixed types compare by (type name, value)
    return tuple((0, "", "") if v is None else (1, type(v).__name__, v) for v in key)


def equivalence_classes(dataset: Dataset, qi: Sequence[str]) -> list[EquivalenceClass]:
    """Group rows by their exact quasi-identifier tuple, sorted by key."""
    cols = [dataset.column(name).values for name in qi]
    groups: dict[tuple, list[int]] = defaultdict(list)
    for i in range(dataset.row_count):
        groups[tuple(c[i] for c in cols)].append(i)
    return [
        EquivalenceClass(key, tuple(rows))
        for key, rows in sorted(groups.items(), key=lambda kv: _sort_key(kv[0]))
    ]


def verify_k(dataset: Dataset, qi: Sequence[str], k: int) -> bool:
    if k < 1:
        raise ValueError("k must be >= 1")
    return all(ec.size >= k for ec in equivalence_classes(dataset, qi))


def prosecutor_risk(dataset: Dataset, qi: Sequence[str]) -> float:
    """Worst-case re-identification probability, 1 / smallest class size."""
    classes = equivalence_classes(dataset, qi)
    if not classes:
        raise EmptyDataset("prosecutor risk is undefined for an empty dataset")
    return 1.0 / min(ec.size for ec in classes)


@dataclass(frozen=True)
class KAnonConfig:
    k: int
    qi: tuple[str, ...]
    hierarchies: Mapping[str, Hierarchy]
    max_suppression_fraction: float = 0.05

    def __post_init__(self) -> None:
        object.__setattr__(self, "qi", tuple(self.qi))
        if self.k < 1:
            raise ConfigError("/k", "must be an integer >= 1")
        if not 0 <= self.max_suppression_fraction <= 1:
            raise ConfigError("/max_suppression_fraction", "must be a number in [0, 1]")
        for name in self.qi:
            if name not in self.hierarchies:
                raise ConfigError("/columns", f"quasi-identifier {name!r} has no hierarchy")

    @classmethod
    def from_pipeline(cls, config: PipelineConfig, k: Optional[int] = None) -> "KAnonConfig":
        qi = config.quasi_identifiers
        return cls(
            k=config.k if k is None else k,
            qi=tuple(qi),
            hierarchies={name: config.spec(name).hierarchy for name in qi},
            max_suppression_fraction=config.max_suppression_fraction,
        )


@dataclass(frozen=True)
class KAnonResult:
    dataset: Dataset
    chosen_levels: dict[str, int]
    suppressed_rows: int
    achieved_k: int


class _Lattice:
    """Generalized QI columns cached per (column, level)."""

    def __init__(self, dataset: Dataset, config: KAnonConfig):
        self.dataset = dataset
        self.config = config
        self._cols: dict[tuple[str, int], tuple] = {}
        self._entropy: dict[tuple[str, int], float] = {}

    def column(self, name: str, level: int) -> tuple:
        key = (name, level)
        if key not in self._cols:
            col = generalize(self.dataset.column(name), self.config.hierarchies[name], level)
            self._cols[key] = col.values
            self._entropy[key] = shannon_entropy(col.values)
        return self._cols[key]

    def entropy(self, name: str, level: int) -> float:
        self.column(name, level)
        return self._entropy[(name, level)]

    def class_sizes(self, levels: Sequence[int]) -> list[int]:
        cols = [self.column(n, l) for n, l in zip(self.config.qi, levels)]
        counts: dict[tuple, int] = defaultdict(int)
        for key in zip(*cols):
            counts[key] += 1
        return list(counts.values())

    def outliers(self, levels: Sequence[int]) -> int:
        """Rows that would have to be suppressed at this node."""
        k = self.config.k
        return sum(s for s in self.class_sizes(levels) if s < k)


def _budget(config: KAnonConfig, n: int) -> float:
    return config.max_suppression_fraction * n


def k_anonymize(dataset: Dataset, config: KAnonConfig) -> KAnonResult:
    """Enforce k-anonymity by greedy bottom-up global recoding plus suppression.

    Starting from level 0 everywhere, each step tries raising each
    quasi-identifier by one level and commits the candidate with the largest
    smallest-class size; ties go to the smallest total entropy loss, then to
    config order. The search stops as soon as the rows sitting in classes
    smaller than ``k`` fit within the suppression budget, or when every
    column is at its top level. Those rows are then removed.

    Raises :class:`InfeasibleK` if the suppression budget is exceeded.
    """
    for name in config.qi:
        col = dataset.column(name)
        if col.attribute_class is not AttributeClass.QUASI_IDENTIFIER:
            raise ConfigError(
                "/columns", f"column {name!r} is {col.attribute_class.value}, not a quasi-identifier"
            )
    n = dataset.row_count
    qi = config.qi
    lattice = _Lattice(dataset, config)
    levels = [0] * len(qi)
    tops = [config.hierarchies[name].height for name in qi]
    budget = _budget(config, n)

    while qi and lattice.outliers(levels) > budget:
        best = None
        for j, name in enumerate(qi):
            if levels[j] >= tops[j]:
                continue
            cand = list(levels)
            cand[j] += 1
            min_size = min(lattice.class_sizes(cand), default=0)
            loss = sum(
                lattice.entropy(q, 0) - lattice.entropy(q, l) for q, l in zip(qi, cand)
            )
            rank = (-min_size, loss, j)
            if best is None or rank < best[0]:
                best = (rank, cand)
        if best is None:
            break
        levels = best[1]
        logger.debug("k-anonymity step -> %s", dict(zip(qi, levels)))

    generalized = dataset
    for name, level in zip(qi, levels):
        if level:
            generalized = generalized.replace_column(
                generalize(dataset.column(name), config.hierarchies[name], level)
            )

    if qi:
        classes = equivalence_classes(generalized, qi)
        keep = sorted(i for ec in classes if ec.size >= config.k for i in ec.rows)
    else:
        keep = list(range(n)) if n >= config.k else []
    suppressed = n - len(keep)
    if suppressed > budget:
        raise InfeasibleK(
            f"k={config.k} needs {suppressed} of {n} rows suppressed, "
            f"budget is {config.max_suppression_fraction:.2%}"
        )
    result = generalized.select_rows(keep) if suppressed else generalized
    if qi:
        sizes = [ec.size for ec in equivalence_classes(result, qi)]
    else:
        sizes = [result.row_count] if result.row_count else []
    achieved = min(sizes) if sizes else 0
    return KAnonResult(result, dict(zip(qi, levels)), suppressed, achieved)
