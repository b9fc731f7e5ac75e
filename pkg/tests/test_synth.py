import random

import pytest

from anonkit.dataset import AttributeClass, Kind, frequency_distribution
from anonkit.errors import InvalidLength
from anonkit.io import dataset_to_bytes
from anonkit.rng import SplitMix64
from anonkit.synth import (
    AGE_BAND_RANGES,
    AGE_BANDS,
    CITIES,
    GeneratorSpec,
    Profile,
    Variant,
    cpf_check_digits,
    generate,
    quota_counts,
    validate_cpf,
)

from oracles import cpf_digits_oracle

IDENTIFIERS = ["Nome", "CPF", "E-mail", "Endereço"]
PERSONAL = IDENTIFIERS + ["Faixa Etária", "Cidade", "Estado", "Estado Civil", "Cor"]


def test_splitmix64_reference_stream():
    # first outputs for seed 0 from the published SplitMix64 reference code
    rng = SplitMix64(0)
    assert [rng.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F,
    ]


def test_cpf_check_digits_examples():
    assert cpf_check_digits("111444777") == "35"
    assert cpf_check_digits("000000000") == "00"
    with pytest.raises(InvalidLength):
        cpf_check_digits("12345678")
    with pytest.raises(InvalidLength):
        cpf_check_digits("12345678a")


def test_cpf_check_digits_match_oracle():
    rnd = random.Random(5)
    for _ in range(2000):
        base = f"{rnd.randrange(10**9):09d}"
        assert cpf_check_digits(base) == cpf_digits_oracle(base)


@pytest.mark.parametrize(
    "text,ok",
    [("111.444.777-35", True), ("11144477735", True), ("111.111.111-11", False),
     ("123", False), ("111.444.777-36", False), ("111444777-35", False),
     ("111.444.777-35 ", False), ("١١١٤٤٤٧٧٧٣٥", False)],
)
def test_validate_cpf(text, ok):
    assert validate_cpf(text) is ok


def test_generate_sensitive_shape(sensitive_data):
    assert sensitive_data.row_count == 250
    assert sensitive_data.names == PERSONAL + ["Problema de Saúde"]
    nome = frequency_distribution(sensitive_data.column("Nome"))
    assert len(nome) == 250


def test_generate_minimal_personal():
    ds = generate(GeneratorSpec(1, 0, Variant.PERSONAL))
    assert ds.row_count == 1 and ds.names == PERSONAL
    assert validate_cpf(ds.column("CPF").values[0])


def test_generate_is_deterministic():
    spec = GeneratorSpec(250, 9, Variant.SENSITIVE, Profile.REALISTIC, with_age=True)
    assert dataset_to_bytes(generate(spec)) == dataset_to_bytes(generate(spec))
    other = GeneratorSpec(250, 10, Variant.SENSITIVE, Profile.REALISTIC, with_age=True)
    assert generate(spec) != generate(other)


def test_generate_rejects_empty():
    with pytest.raises(ValueError):
        GeneratorSpec(0)


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("profile", list(Profile))
def test_generated_invariants(seed, profile):
    ds = generate(GeneratorSpec(300, seed, Variant.SENSITIVE, profile, with_age=True))
    for name in IDENTIFIERS:
        col = ds.column(name)
        assert col.attribute_class is AttributeClass.DIRECT_IDENTIFIER
        assert len(set(col.values)) == ds.row_count
    assert all(validate_cpf(c) for c in ds.column("CPF").values)
    assert all(e.count("@") == 1 for e in ds.column("E-mail").values)
    assert set(ds.column("Faixa Etária").values) <= set(AGE_BANDS)
    assert set(ds.column("Cidade").values) <= set(CITIES)
    for city, state in zip(ds.column("Cidade").values, ds.column("Estado").values):
        assert CITIES[city] == state
    for band, age in zip(ds.column("Faixa Etária").values, ds.column("Idade").values):
        lo, hi = AGE_BAND_RANGES[band]
        assert lo <= age <= hi
    assert ds.column("Idade").kind is Kind.INTEGER
    assert ds.column("Problema de Saúde").attribute_class is AttributeClass.SENSITIVE
    assert len(set(ds.column("Problema de Saúde").values)) <= 10
    assert len(set(ds.column("Cor").values)) <= 5
    assert len(set(ds.column("Estado Civil").values)) <= 2


def test_replication_profile_has_constant_age_band():
    ds = generate(GeneratorSpec(250, 1))
    assert len(set(ds.column("Faixa Etária").values)) == 1
    realistic = generate(GeneratorSpec(250, 1, profile=Profile.REALISTIC))
    assert len(set(realistic.column("Faixa Etária").values)) == 5


def test_variants_share_personal_columns():
    a = generate(GeneratorSpec(40, 3, Variant.PERSONAL))
    b = generate(GeneratorSpec(40, 3, Variant.SENSITIVE, with_age=True))
    for name in PERSONAL:
        assert a.column(name) == b.column(name)


def test_quota_counts_sum_and_proportion():
    rng = SplitMix64(1)
    counts = quota_counts([97, 3], 250, rng)
    assert counts == [243, 7]
    for n in (1, 7, 250, 1001):
        assert sum(quota_counts([1] * 20, n, rng)) == n
