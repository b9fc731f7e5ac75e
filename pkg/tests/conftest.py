from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from anonkit.cli import bundled_config  # noqa: E402
from anonkit.dataset import AttributeClass, Column, Dataset, Kind  # noqa: E402
from anonkit.io import load_config  # noqa: E402
from anonkit.synth import GeneratorSpec, Variant, generate  # noqa: E402

QI = AttributeClass.QUASI_IDENTIFIER


def text_column(name, values, cls=QI):
    return Column(name, cls, Kind.TEXT, tuple(values))


def int_column(name, values, cls=QI):
    return Column(name, cls, Kind.INTEGER, tuple(values))


@pytest.fixture(scope="session")
def sensitive_config():
    return load_config(bundled_config("ref_sensitive"))


@pytest.fixture(scope="session")
def personal_config():
    return load_config(bundled_config("ref_personal"))


@pytest.fixture(scope="session")
def perturb_config():
    return load_config(bundled_config("ref_perturb"))


@pytest.fixture(scope="session")
def sensitive_data() -> Dataset:
    return generate(GeneratorSpec(250, 42, Variant.SENSITIVE))


@pytest.fixture
def three_rows() -> Dataset:
    return Dataset.from_columns([
        text_column("Faixa", ["18-25", "18-25", "26-35"]),
        text_column("Cidade", ["SP", "SP", "RJ"]),
    ])


# -- acceptance summary -------------------------------------------------------
# Every test marked ``acceptance(n)`` contributes to criterion n; the summary
# prints one PASS/FAIL line per criterion after the run.

_criteria: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or not marker.args:
        return
    entry = _criteria.setdefault(
        marker.args[0], {"title": (item.function.__doc__ or item.name).strip().splitlines()[0],
                         "failed": False, "ran": False},
    )
    if report.when == "call":
        entry["ran"] = True
    if report.failed:
        entry["failed"] = True


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        entry = _criteria[n]
        status = "FAIL" if entry["failed"] or not entry["ran"] else "PASS"
        terminalreporter.write_line(f"criterion {n:>2}: {status}  {entry['title']}")
