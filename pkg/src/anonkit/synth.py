"""Seeded generator for synthetic Brazilian personal records.

Two variants exist: personal data only, and personal plus a sensitive health
field. Categorical fields are filled by *quota sampling*: the exact count of
each label is fixed by largest-remainder apportionment of its weight, then the
column is shuffled. Column entropies therefore depend only on ``n``, not on
the seed, while row assignment stays random.

Vocabulary weights (constants below) are chosen so that at n=250 the column
entropies are: Cidade 4.32, Estado 0.47, Estado Civil 0.18, Cor 1.41 and
Problema de Saúde 2.75 bits. Identifier columns are all-unique.
"""

from __future__ import annotations

import enum
import re
import unicodedata
from dataclasses import dataclass
from typing import Sequence

from .dataset import AttributeClass, Column, Dataset, Kind
from .errors import InvalidLength
from .rng import SplitMix64, derive_seed

DI = AttributeClass.DIRECT_IDENTIFIER
QI = AttributeClass.QUASI_IDENTIFIER


class Variant(enum.Enum):
    PERSONAL = "personal"
    SENSITIVE = "sensitive"


class Profile(enum.Enum):
    # constant age band, as in the published table
    REPLICATION = "replication"
    REALISTIC = "realistic"


AGE_BANDS = ("18-25", "26-35", "36-45", "46-60", "60+")
AGE_BAND_RANGES = {
    "18-25": (18, 25),
    "26-35": (26, 35),
    "36-45": (36, 45),
    "46-60": (46, 60),
    "60+": (61, 90),
}
REPLICATION_AGE_BAND = "26-35"
REALISTIC_AGE_WEIGHTS = (18, 25, 22, 22, 13)

# 18 cities in SP and 2 in RJ: Estado stays heavily skewed while Cidade
# is near-uniform over 20 values.
CITIES = {
    "São Paulo": "SP",
    "Campinas": "SP",
    "Santos": "SP",
    "Sorocaba": "SP",
    "Ribeirão Preto": "SP",
    "São José dos Campos": "SP",
    "Guarulhos": "SP",
    "Osasco": "SP",
    "Santo André": "SP",
    "São Bernardo do Campo": "SP",
    "Jundiaí": "SP",
    "Piracicaba": "SP",
    "Bauru": "SP",
    "Franca": "SP",
    "Limeira": "SP",
    "Marília": "SP",
    "Presidente Prudente": "SP",
    "São Carlos": "SP",
    "Rio de Janeiro": "RJ",
    "Niterói": "RJ",
}

MARITAL_STATUS = (("Casado", 97), ("Solteiro", 3))

SKIN_COLOR = (("Branca", 62), ("Parda", 27), ("Preta", 7), ("Amarela", 3), ("Indígena", 1))

HEALTH_CONDITIONS = (
    ("Hipertensão", 35),
    ("Diabetes", 20),
    ("Asma", 12),
    ("Depressão", 9),
    ("Ansiedade", 7),
    ("Obesidade", 5),
    ("Artrite", 4),
    ("Enxaqueca", 4),
    ("Hipotireoidismo", 2),
    ("Doença cardíaca", 2),
)

FIRST_NAMES = (
    "Ana", "Maria", "Juliana", "Fernanda", "Beatriz", "Camila", "Larissa",
    "Patrícia", "Aline", "Mariana", "Gabriela", "Letícia", "Bruna", "Amanda",
    "Carla", "Daniela", "Renata", "Vanessa", "Tatiane", "Luana", "Isabela",
    "Sofia", "Helena", "Alice", "Laura", "Valentina", "Cecília", "Clara",
    "João", "José", "Pedro", "Lucas", "Gabriel", "Mateus", "Rafael", "Felipe",
    "Gustavo", "Bruno", "Rodrigo", "Thiago", "Eduardo", "Leonardo", "Marcelo",
    "Ricardo", "Fernando", "Paulo", "André", "Carlos", "Diego", "Vinícius",
    "Henrique", "Samuel", "Davi", "Arthur", "Miguel", "Heitor", "Otávio",
    "Caio", "Igor", "Murilo",
)

SURNAMES = (
    "Silva", "Santos", "Oliveira", "Souza", "Rodrigues", "Ferreira", "Alves",
    "Pereira", "Lima", "Gomes", "Costa", "Ribeiro", "Martins", "Carvalho",
    "Almeida", "Lopes", "Soares", "Fernandes", "Vieira", "Barbosa", "Rocha",
    "Dias", "Nascimento", "Andrade", "Moreira", "Nunes", "Marques", "Machado",
    "Mendes", "Freitas", "Cardoso", "Ramos", "Gonçalves", "Santana", "Teixeira",
    "Araújo", "Pinto", "Correia", "Moura", "Cavalcanti", "Monteiro", "Batista",
    "Campos", "Castro", "Azevedo", "Reis", "Duarte", "Farias", "Miranda",
    "Nogueira",
)

STREETS = (
    "Rua das Flores", "Rua XV de Novembro", "Avenida Brasil", "Rua Sete de Setembro",
    "Avenida Paulista", "Rua Tiradentes", "Rua Dom Pedro II", "Avenida Getúlio Vargas",
    "Rua São João", "Rua Santa Catarina", "Rua Marechal Deodoro", "Rua Bela Vista",
    "Avenida Independência", "Rua Rui Barbosa", "Rua José Bonifácio", "Rua do Comércio",
    "Rua Barão do Rio Branco", "Avenida Santos Dumont", "Rua Amazonas", "Rua Bahia",
    "Rua Pernambuco", "Rua Minas Gerais", "Rua Goiás", "Rua Paraná",
    "Alameda Santos", "Rua Augusta", "Rua da Consolação", "Rua Voluntários da Pátria",
    "Avenida Atlântica", "Rua das Palmeiras", "Rua dos Andradas", "Travessa do Mercado",
)

EMAIL_DOMAINS = ("gmail.com", "hotmail.com", "outlook.com", "yahoo.com.br", "uol.com.br", "bol.com.br")


@dataclass(frozen=True)
class GeneratorSpec:
    n: int = 250
    seed: int = 0
    variant: Variant = Variant.SENSITIVE
    profile: Profile = Profile.REPLICATION
    with_age: bool = False

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        object.__setattr__(self, "variant", Variant(self.variant))
        object.__setattr__(self, "profile", Profile(self.profile))


# ---------------------------------------------------------------------------
# CPF
# ---------------------------------------------------------------------------

_CPF_RE = re.compile(r"(\d{3})\.(\d{3})\.(\d{3})-(\d{2})\Z|(\d{11})\Z", re.ASCII)


def _cpf_digit(digits: Sequence[int]) -> int:
    top = len(digits) + 1
    r = sum(d * w for d, w in zip(digits, range(top, 1, -1))) % 11
    return 0 if r < 2 else 11 - r


def cpf_check_digits(base: str) -> str:
    """Return the two mod-11 check digits of a 9-digit CPF base."""
    if len(base) != 9 or not base.isascii() or not base.isdigit():
        raise InvalidLength(f"CPF base must be exactly 9 digits, got {base!r}")
    digits = [int(c) for c in base]
    d10 = _cpf_digit(digits)
    d11 = _cpf_digit(digits + [d10])
    return f"{d10}{d11}"


def validate_cpf(text: str) -> bool:
    if not isinstance(text, str):
        return False
    m = _CPF_RE.match(text)
    if not m:
        return False
    digits = m.group(5) or "".join(m.group(1, 2, 3, 4))
    if len(set(digits)) == 1:
        return False
    return cpf_check_digits(digits[:9]) == digits[9:]


def format_cpf(digits: str) -> str:
    return f"{digits[:3]}.{digits[3:6]}.{digits[6:9]}-{digits[9:]}"


def random_cpf(rng: SplitMix64) -> str:
    while True:
        base = f"{rng.randbelow(10**9):09d}"
        if len(set(base)) > 1:
            return format_cpf(base + cpf_check_digits(base))


# ---------------------------------------------------------------------------
# Sampling helpers
# ---------------------------------------------------------------------------


def quota_counts(weights: Sequence[float], n: int, rng: SplitMix64) -> list[int]:
    """Largest-remainder apportionment of ``n`` items; ties broken randomly."""
    total = float(sum(weights))
    raw = [w * n / total for w in weights]
    counts = [int(r) for r in raw]
    tiebreak = list(range(len(weights)))
    rng.shuffle(tiebreak)
    rank = {i: pos for pos, i in enumerate(tiebreak)}
    order = sorted(range(len(weights)), key=lambda i: (-(raw[i] - counts[i]), rank[i]))
    for i in order[: n - sum(counts)]:
        counts[i] += 1
    return counts


def quota_sample(labels: Sequence[str], weights: Sequence[float], n: int, rng: SplitMix64) -> list[str]:
    out: list[str] = []
    for label, count in zip(labels, quota_counts(weights, n, rng)):
        out.extend([label] * count)
    rng.shuffle(out)
    return out


def _ascii_slug(text: str) -> str:
    folded = unicodedata.normalize("NFKD", text).encode("ascii", "ignore").decode()
    return re.sub(r"[^a-z0-9]+", "", folded.lower())


def _unique_names(n: int, rng: SplitMix64) -> list[tuple[str, str, str]]:
    seen: set[tuple[str, str, str]] = set()
    out = []
    capacity = len(FIRST_NAMES) * len(SURNAMES) * (len(SURNAMES) - 1)
    if n > capacity:
        raise ValueError(f"cannot generate more than {capacity} distinct names")
    while len(out) < n:
        first = rng.choice(FIRST_NAMES)
        middle = rng.choice(SURNAMES)
        last = rng.choice(SURNAMES)
        if middle == last:
            continue
        key = (first, middle, last)
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out


def _emails(names: Sequence[tuple[str, str, str]], rng: SplitMix64) -> list[str]:
    seen: set[str] = set()
    out = []
    for first, _, last in names:
        base = f"{_ascii_slug(first)}.{_ascii_slug(last)}"
        domain = rng.choice(EMAIL_DOMAINS)
        local, suffix = base, 1
        while f"{local}@{domain}" in seen:
            suffix += 1
            local = f"{base}{suffix}"
        seen.add(f"{local}@{domain}")
        out.append(f"{local}@{domain}")
    return out


def _addresses(n: int, rng: SplitMix64) -> list[str]:
    seen: set[str] = set()
    out = []
    while len(out) < n:
        addr = f"{rng.choice(STREETS)}, {rng.randint(1, 4999)}"
        if addr not in seen:
            seen.add(addr)
            out.append(addr)
    return out


def _unique_cpfs(n: int, rng: SplitMix64) -> list[str]:
    seen: set[str] = set()
    out = []
    while len(out) < n:
        cpf = random_cpf(rng)
        if cpf not in seen:
            seen.add(cpf)
            out.append(cpf)
    return out


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------


def generate(spec: GeneratorSpec) -> Dataset:
    """Build a synthetic dataset; a pure function of ``spec``.

    Health conditions and ages use separate derived streams, so the personal
    columns are identical across variants and with or without ``Idade``.
    """
    n = spec.n
    rng = SplitMix64(spec.seed)

    names = _unique_names(n, rng)
    full_names = [" ".join(parts) for parts in names]
    cpfs = _unique_cpfs(n, rng)
    emails = _emails(names, rng)
    addresses = _addresses(n, rng)
    if spec.profile is Profile.REPLICATION:
        bands = [REPLICATION_AGE_BAND] * n
    else:
        bands = quota_sample(AGE_BANDS, REALISTIC_AGE_WEIGHTS, n, rng)
    cities = quota_sample(list(CITIES), [1] * len(CITIES), n, rng)
    states = [CITIES[c] for c in cities]
    marital = quota_sample(*zip(*MARITAL_STATUS), n, rng)
    color = quota_sample(*zip(*SKIN_COLOR), n, rng)

    cols = [
        Column("Nome", DI, Kind.TEXT, tuple(full_names)),
        Column("CPF", DI, Kind.TEXT, tuple(cpfs)),
        Column("E-mail", DI, Kind.TEXT, tuple(emails)),
        Column("Endereço", DI, Kind.TEXT, tuple(addresses)),
        Column("Faixa Etária", QI, Kind.TEXT, tuple(bands)),
    ]
    if spec.with_age:
        age_rng = SplitMix64(derive_seed(spec.seed, 2))
        ages = tuple(age_rng.randint(*AGE_BAND_RANGES[b]) for b in bands)
        cols.append(Column("Idade", QI, Kind.INTEGER, ages))
    cols += [
        Column("Cidade", QI, Kind.TEXT, tuple(cities)),
        Column("Estado", QI, Kind.TEXT, tuple(states)),
        Column("Estado Civil", QI, Kind.TEXT, tuple(marital)),
        Column("Cor", QI, Kind.TEXT, tuple(color)),
    ]
    if spec.variant is Variant.SENSITIVE:
        health_rng = SplitMix64(derive_seed(spec.seed, 1))
        health = quota_sample(*zip(*HEALTH_CONDITIONS), n, health_rng)
        cols.append(Column("Problema de Saúde", AttributeClass.SENSITIVE, Kind.TEXT, tuple(health)))
    return Dataset(tuple(cols), n)


def column_names(variant: Variant, with_age: bool = False) -> list[str]:
    """Columns that :func:`generate` emits for a variant, in order."""
    return generate(GeneratorSpec(1, 0, variant, Profile.REPLICATION, with_age)).names
