import pytest
from hypothesis import given, strategies as st

from anonkit.dataset import (
    AttributeClass,
    Column,
    Dataset,
    Kind,
    column_view,
    frequency_distribution,
)
from anonkit.errors import KindMismatch, SchemaMismatch, UnknownColumn

from conftest import int_column, text_column


def test_column_view_returns_column(three_rows):
    col = column_view(three_rows, "Cidade")
    assert col.values == ("SP", "SP", "RJ")
    assert column_view(three_rows, "Cidade") == col


def test_column_view_unknown(three_rows):
    with pytest.raises(UnknownColumn):
        column_view(three_rows, "Renda")


def test_column_view_empty_dataset():
    ds = Dataset((text_column("Nome", [], AttributeClass.DIRECT_IDENTIFIER),), 0)
    assert column_view(ds, "Nome").values == ()


def test_frequency_distribution_examples():
    assert frequency_distribution(text_column("x", ["SP", "SP", "RJ"])) == {"SP": 2, "RJ": 1}
    assert frequency_distribution(text_column("x", ["A", None, "A"])) == {"A": 2}
    unique = frequency_distribution(text_column("x", [f"{i:011d}" for i in range(250)]))
    assert len(unique) == 250 and set(unique.values()) == {1}


@given(st.lists(st.one_of(st.none(), st.sampled_from("abcde")), max_size=60))
def test_counts_plus_missing_equal_row_count(values):
    col = text_column("x", values)
    assert sum(frequency_distribution(col).values()) + col.missing_count == len(values)


def test_columns_must_share_row_count():
    with pytest.raises(SchemaMismatch):
        Dataset.from_columns([text_column("a", ["x"]), text_column("b", ["x", "y"])])


def test_column_names_unique():
    with pytest.raises(SchemaMismatch):
        Dataset.from_columns([text_column("a", ["x"]), text_column("a", ["y"])])


@pytest.mark.parametrize(
    "kind,value",
    [(Kind.TEXT, 3), (Kind.TEXT, ""), (Kind.INTEGER, 1.5), (Kind.INTEGER, True),
     (Kind.REAL, 2), (Kind.REAL, float("nan"))],
)
def test_column_rejects_wrong_kind(kind, value):
    with pytest.raises(KindMismatch):
        Column("c", AttributeClass.INSENSITIVE, kind, (value,))


def test_dataset_is_immutable(three_rows):
    with pytest.raises(AttributeError):
        three_rows.row_count = 5
    dropped = three_rows.drop("Faixa")
    assert three_rows.names == ["Faixa", "Cidade"] and dropped.names == ["Cidade"]


def test_select_rows_keeps_order():
    ds = Dataset.from_columns([int_column("a", [10, 20, 30])])
    assert ds.select_rows([2, 0]).column("a").values == (30, 10)
