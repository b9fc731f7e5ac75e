import math
import time

import pytest
from hypothesis import given, strategies as st

from anonkit.dataset import Dataset
from anonkit.errors import NegativeEntropy
from anonkit.metrics import (
    ColumnStatus,
    evaluate,
    information_loss,
    measure,
    shannon_entropy,
)

from conftest import int_column, text_column
from oracles import entropy_bruteforce


def test_entropy_examples():
    assert shannon_entropy(text_column("x", [f"{i:011d}" for i in range(250)])) == pytest.approx(
        7.965784284662088, abs=1e-12
    )
    assert shannon_entropy(text_column("x", ["a", "b", "c", "d"] * 5)) == 2.0
    assert shannon_entropy(text_column("x", ["same"] * 9)) == 0.0
    assert shannon_entropy(text_column("x", [])) == 0.0
    assert shannon_entropy(text_column("x", [None, None])) == 0.0


def test_entropy_ignores_missing():
    assert shannon_entropy(text_column("x", ["a", None, "b"])) == 1.0


def test_entropy_accepts_plain_iterables():
    assert shannon_entropy(iter([1, 1, 2, 2])) == 1.0


@given(st.lists(st.one_of(st.none(), st.integers(-3, 3)), max_size=60))
def test_entropy_matches_oracle_and_bounds(values):
    h = shannon_entropy(values)
    assert h == pytest.approx(entropy_bruteforce(values), abs=1e-12)
    distinct = len({v for v in values if v is not None})
    assert 0.0 <= h <= (math.log2(distinct) if distinct else 0.0) + 1e-12


@pytest.mark.parametrize(
    "h0,h1,expected",
    [(4.2, 0.0, 100.0), (0.0, 1.1, 0.0), (8.0, 4.0, 50.0), (2.0, 3.0, 0.0), (0.0, 0.0, 0.0)],
)
def test_information_loss_examples(h0, h1, expected):
    assert information_loss(h0, h1) == expected


def test_information_loss_rejects_negative():
    with pytest.raises(NegativeEntropy):
        information_loss(-0.1, 1.0)
    with pytest.raises(NegativeEntropy):
        information_loss(1.0, -0.1)


@given(st.floats(0, 50), st.floats(0, 50))
def test_information_loss_bounds(h0, h1):
    loss = information_loss(h0, h1)
    assert 0.0 <= loss <= 100.0
    if h0 == 0:
        assert loss == 0.0


def test_evaluate_statuses():
    original = Dataset.from_columns([
        text_column("Cidade", ["SP", "RJ", "BH", "SP"]),
        text_column("Faixa", ["26-35"] * 4),
        text_column("Nome", ["a", "b", "c", "d"]),
    ])
    anonymized = Dataset.from_columns([
        text_column("Cidade", ["*"] * 4),
        text_column("Faixa", ["18-35"] * 4),
        int_column("Grupo", [1, 1, 2, 2]),
    ])
    report = evaluate(original, anonymized, "generalize", seed=3)
    assert [c.name for c in report.columns] == ["Cidade", "Faixa", "Nome", "Grupo"]
    cidade = report.column("Cidade")
    assert cidade.status is ColumnStatus.COMPARED
    assert cidade.anonymized_entropy_bits == 0.0 and cidade.loss_percent == 100.0
    assert cidade.entropy_delta_bits == -cidade.original_entropy_bits
    assert report.column("Faixa").loss_percent == 0.0
    nome = report.column("Nome")
    assert nome.status is ColumnStatus.REMOVED and nome.loss_percent == 100.0
    grupo = report.column("Grupo")
    assert grupo.status is ColumnStatus.ADDED and grupo.loss_percent == 0.0
    assert grupo.anonymized_entropy_bits == 1.0
    assert report.seed == 3 and report.runtime_ms is None


def test_removed_constant_column_keeps_zero_loss():
    original = Dataset.from_columns([text_column("Faixa", ["26-35"] * 3), text_column("c", "abc")])
    report = evaluate(original, original.drop("Faixa"), "x")
    assert report.column("Faixa").loss_percent == 0.0


def test_evaluate_identity_has_no_loss(sensitive_data):
    report = evaluate(sensitive_data, sensitive_data, "none")
    assert all(c.loss_percent == 0.0 for c in report.columns)
    assert all(c.entropy_delta_bits == 0.0 for c in report.columns)


def test_report_to_dict_schema(sensitive_data):
    doc = evaluate(sensitive_data, sensitive_data.drop("CPF"), "suppress",
                   achieved_k=5, suppressed_rows=0, seed=42).to_dict()
    assert list(doc) == ["technique", "seed", "runtime_ms", "k_achieved", "suppressed_rows", "columns"]
    assert list(doc["columns"][0]) == [
        "name", "status", "entropy_original_bits", "entropy_anonymized_bits",
        "loss_percent", "entropy_delta_bits",
    ]
    assert doc["columns"][1]["status"] == "removed_by_anonymization"


def test_measure_returns_result_and_elapsed():
    result, ms = measure(lambda x: (time.sleep(0.01), x * 2)[1], 21)
    assert result == 42
    assert 5.0 <= ms < 5000.0
