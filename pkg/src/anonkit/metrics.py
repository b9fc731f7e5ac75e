"""Entropy-based utility evaluation of an anonymization run."""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, TypeVar, Union

from .dataset import Column, Dataset, Value, frequency_distribution
from .errors import NegativeEntropy

T = TypeVar("T")


def shannon_entropy(column: Union[Column, Iterable[Value]]) -> float:
    """Empirical Shannon entropy in bits, ignoring missing cells.

    Empty, all-missing and constant columns have entropy 0.
    """
    counts = frequency_distribution(column)
    total = sum(counts.values())
    if total == 0 or len(counts) == 1:
        return 0.0
    h = -math.fsum((c / total) * math.log2(c / total) for c in counts.values())
    return max(h, 0.0)


def information_loss(h_original: float, h_anonymized: float) -> float:
    """Percentage of the original entropy lost, clamped to [0, 100].

    Entropy increases count as no loss; a zero-entropy original always
    reports 0.
    """
    if h_original < 0 or h_anonymized < 0:
        raise NegativeEntropy(
            f"entropies must be non-negative, got {h_original!r}, {h_anonymized!r}"
        )
    if h_original == 0:
        return 0.0
    loss = (h_original - h_anonymized) / h_original * 100.0
    return min(max(loss, 0.0), 100.0)


class ColumnStatus(enum.Enum):
    COMPARED = "compared"
    REMOVED = "removed_by_anonymization"
    ADDED = "added_by_anonymization"


@dataclass(frozen=True)
class ColumnMetrics:
    name: str
    original_entropy_bits: float
    anonymized_entropy_bits: float
    loss_percent: float
    status: ColumnStatus

    @property
    def entropy_delta_bits(self) -> float:
        return self.anonymized_entropy_bits - self.original_entropy_bits


@dataclass(frozen=True)
class EvaluationReport:
    technique: str
    columns: tuple[ColumnMetrics, ...]
    runtime_ms: Optional[float] = None
    achieved_k: Optional[int] = None
    suppressed_rows: Optional[int] = None
    seed: Optional[int] = None
    stage_ms: dict = field(default_factory=dict, compare=False)

    def column(self, name: str) -> ColumnMetrics:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "technique": self.technique,
            "seed": self.seed,
            "runtime_ms": self.runtime_ms,
            "k_achieved": self.achieved_k,
            "suppressed_rows": self.suppressed_rows,
            "columns": [
                {
                    "name": c.name,
                    "status": c.status.value,
                    "entropy_original_bits": c.original_entropy_bits,
                    "entropy_anonymized_bits": c.anonymized_entropy_bits,
                    "loss_percent": c.loss_percent,
                    "entropy_delta_bits": c.entropy_delta_bits,
                }
                for c in self.columns
            ],
        }


def evaluate(
    original: Dataset,
    anonymized: Dataset,
    label: str,
    runtime_ms: Optional[float] = None,
    *,
    achieved_k: Optional[int] = None,
    suppressed_rows: Optional[int] = None,
    seed: Optional[int] = None,
    stage_ms: Optional[dict] = None,
) -> EvaluationReport:
    """Compare per-column entropies of an original and an anonymized dataset.

    Rows follow the original column order, then columns that exist only in
    the anonymized dataset. A column absent after anonymization reports 100%
    loss (0% if it carried no information to begin with); a new column
    reports 0%.
    """
    rows = []
    for col in original.columns:
        h0 = shannon_entropy(col)
        if col.name in anonymized:
            h1 = shannon_entropy(anonymized.column(col.name))
            rows.append(ColumnMetrics(col.name, h0, h1, information_loss(h0, h1),
                                      ColumnStatus.COMPARED))
        else:
            rows.append(ColumnMetrics(col.name, h0, 0.0, information_loss(h0, 0.0),
                                      ColumnStatus.REMOVED))
    for col in anonymized.columns:
        if col.name not in original:
            rows.append(ColumnMetrics(col.name, 0.0, shannon_entropy(col), 0.0,
                                      ColumnStatus.ADDED))
    return EvaluationReport(
        technique=label,
        columns=tuple(rows),
        runtime_ms=runtime_ms,
        achieved_k=achieved_k,
        suppressed_rows=suppressed_rows,
        seed=seed,
        stage_ms=dict(stage_ms or {}),
    )


def measure(run: Callable[..., T], *args, **kwargs) -> tuple[T, float]:
    """Call ``run`` and return its result with the wall-clock time in ms."""
    start = time.perf_counter_ns()
    result = run(*args, **kwargs)
    return result, (time.perf_counter_ns() - start) / 1e6
