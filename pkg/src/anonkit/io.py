"""CSV datasets, hierarchy files and JSON pipeline configs.

Output CSV is always comma-separated, RFC 4180 quoted, UTF-8 with LF line
endings. Input tolerates CRLF and a UTF-8 BOM.
"""

from __future__ import annotations

import csv
import io
import json
import os
import re
from pathlib import Path
from typing import BinaryIO, Iterable, Optional, Sequence, Union

from .dataset import AttributeClass, Column, Dataset, Kind, Value
from .errors import ConfigError, HierarchyError, ParseError, SchemaMismatch
from .techniques import (
    CategoryGroups,
    ColumnSpec,
    Hierarchy,
    MaskStrategy,
    NumericBins,
    PerturbationParams,
    PipelineConfig,
    Technique,
    format_value,
)

_INT_RE = re.compile(r"[+-]?[0-9]+\Z")
_REAL_RE = re.compile(r"[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?\Z")

UINT64_MAX = (1 << 64) - 1


def _text_reader(source: BinaryIO) -> io.StringIO:
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8-sig")
    return io.StringIO(data, newline="")


def _parse_cell(cell: str, kind: Kind, row: int, name: str) -> Value:
    if cell == "":
        return None
    if kind is Kind.TEXT:
        return cell
    if kind is Kind.INTEGER:
        if _INT_RE.match(cell):
            return int(cell)
        raise ParseError(row, name, cell, "integer")
    if _REAL_RE.match(cell):
        value = float(cell)
        if value not in (float("inf"), float("-inf")):
            return value
    raise ParseError(row, name, cell, "real")


def read_csv(source: BinaryIO, schema: Union[PipelineConfig, Sequence[ColumnSpec]]) -> Dataset:
    """Read a headed CSV file, typing each column as declared in ``schema``.

    The header must contain exactly the schema's column names (in any order);
    the dataset keeps the file's column order. Empty cells become missing
    values; a non-empty cell that fails to parse raises :class:`ParseError`.
    """
    specs = schema.columns if isinstance(schema, PipelineConfig) else tuple(schema)
    by_name = {s.name: s for s in specs}
    reader = csv.reader(_text_reader(source))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaMismatch("CSV input has no header row") from None
    if len(set(header)) != len(header):
        raise SchemaMismatch(f"duplicate names in CSV header: {header}")
    if set(header) != set(by_name):
        raise SchemaMismatch(
            f"CSV header {sorted(header)} does not match schema {sorted(by_name)}"
        )
    kinds = [by_name[h].kind for h in header]
    cells: list[list[Value]] = [[] for _ in header]
    for row_no, row in enumerate(reader, start=1):
        if not row and len(header) == 1:
            row = [""]
        if len(row) != len(header):
            raise SchemaMismatch(
                f"row {row_no} has {len(row)} fields, header has {len(header)}"
            )
        for j, cell in enumerate(row):
            cells[j].append(_parse_cell(cell, kinds[j], row_no, header[j]))
    cols = tuple(
        Column(h, by_name[h].attribute_class, kinds[j], tuple(cells[j]))
        for j, h in enumerate(header)
    )
    return Dataset(cols, len(cells[0]) if cells else 0)


def read_csv_text(
    source: BinaryIO, classes: Optional[dict[str, AttributeClass]] = None
) -> Dataset:
    """Read a headed CSV file treating every column as text.

    Used where the exact column kinds are unknown, e.g. for anonymized output
    whose columns were recoded. Entropies are unaffected because cell text is
    the canonical form of each value.
    """
    classes = classes or {}
    reader = csv.reader(_text_reader(source))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaMismatch("CSV input has no header row") from None
    rows = [r if r or len(header) != 1 else [""] for r in reader]
    for row_no, row in enumerate(rows, start=1):
        if len(row) != len(header):
            raise SchemaMismatch(
                f"row {row_no} has {len(row)} fields, header has {len(header)}"
            )
    cols = tuple(
        Column(
            h,
            classes.get(h, AttributeClass.INSENSITIVE),
            Kind.TEXT,
            tuple(r[j] or None for r in rows),
        )
        for j, h in enumerate(header)
    )
    return Dataset(cols, len(rows))


_NEEDS_QUOTES = re.compile(r'[,"\r\n]')


def _csv_field(text: str) -> str:
    if _NEEDS_QUOTES.search(text):
        return '"' + text.replace('"', '""') + '"'
    return text


def _csv_line(fields: Sequence[str]) -> str:
    if len(fields) == 1 and fields[0] == "":
        # a bare empty line would read back as a row with no fields
        return '""\n'
    return ",".join(_csv_field(f) for f in fields) + "\n"


def write_csv(dataset: Dataset, sink: BinaryIO) -> None:
    """Write ``dataset`` as CSV; missing cells become empty fields."""
    lines = [_csv_line(dataset.names)]
    lines.extend(_csv_line([format_value(v) for v in row]) for row in dataset.rows())
    sink.write("".join(lines).encode("utf-8"))


def dataset_to_bytes(dataset: Dataset) -> bytes:
    buf = io.BytesIO()
    write_csv(dataset, buf)
    return buf.getvalue()


def read_hierarchy(source: BinaryIO) -> Hierarchy:
    """Read a header-less hierarchy CSV, one row per level-0 value."""
    rows = [tuple(r) for r in csv.reader(_text_reader(source)) if r]
    return Hierarchy(tuple(rows))


def load_hierarchy(path: Union[str, os.PathLike]) -> Hierarchy:
    with open(path, "rb") as fh:
        return read_hierarchy(fh)


# ---------------------------------------------------------------------------
# Pipeline configuration
# ---------------------------------------------------------------------------

_TOP_KEYS = {"seed", "k", "max_suppression_fraction", "columns"}
_COLUMN_KEYS = {"name", "class", "kind", "technique", "params", "hierarchy"}


def _is_int(x: object) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _is_num(x: object) -> bool:
    return (_is_int(x) or isinstance(x, float)) and x == x and abs(x) != float("inf")


def _check_keys(obj: dict, allowed: Iterable[str], path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"{path}/{key}", "unknown key")


def _enum(enum_cls, value, path: str):
    try:
        return enum_cls(value)
    except ValueError:
        choices = ", ".join(repr(e.value) for e in enum_cls)
        raise ConfigError(path, f"expected one of {choices}, got {value!r}") from None


def _parse_params(technique: Technique, kind: Kind, params: dict, path: str) -> object:
    if technique in (Technique.SUPPRESS, Technique.NONE):
        _check_keys(params, (), path)
        return None

    if technique is Technique.MASK:
        _check_keys(params, {"strategy"}, path)
        if "strategy" not in params:
            raise ConfigError(f"{path}/strategy", "required")
        if kind is not Kind.TEXT:
            raise ConfigError(path, "mask applies to text columns only")
        return _enum(MaskStrategy, params["strategy"], f"{path}/strategy")

    if technique is Technique.AGGREGATE:
        _check_keys(params, {"bin_width", "anchor", "groups"}, path)
        if ("bin_width" in params) == ("groups" in params):
            raise ConfigError(path, "exactly one of 'bin_width' or 'groups' is required")
        if "bin_width" in params:
            if not kind.is_numeric:
                raise ConfigError(f"{path}/bin_width", "numeric bins need a numeric column")
            width, anchor = params["bin_width"], params.get("anchor", 0)
            if not _is_num(width) or width <= 0:
                raise ConfigError(f"{path}/bin_width", "must be a positive number")
            if not _is_num(anchor):
                raise ConfigError(f"{path}/anchor", "must be a number")
            return NumericBins(width, anchor)
        if "anchor" in params:
            raise ConfigError(f"{path}/anchor", "only valid with 'bin_width'")
        if kind is not Kind.TEXT:
            raise ConfigError(f"{path}/groups", "category groups need a text column")
        groups = params["groups"]
        if not isinstance(groups, dict) or not groups:
            raise ConfigError(f"{path}/groups", "must be a non-empty object")
        seen: dict[str, str] = {}
        parsed = {}
        for label, members in groups.items():
            gpath = f"{path}/groups/{label}"
            if label == "":
                raise ConfigError(gpath, "group label must be non-empty")
            if not isinstance(members, list) or not all(
                isinstance(m, str) and m for m in members
            ):
                raise ConfigError(gpath, "must be a list of non-empty strings")
            for m in members:
                if m in seen and seen[m] != label:
                    raise ConfigError(gpath, f"value {m!r} already in group {seen[m]!r}")
                seen[m] = label
            parsed[label] = tuple(members)
        return CategoryGroups(parsed)

    if technique is Technique.GENERALIZE:
        _check_keys(params, {"level"}, path)
        level = params.get("level")
        if not _is_int(level) or level < 0:
            raise ConfigError(f"{path}/level", "must be a non-negative integer")
        return level

    # perturb
    _check_keys(params, {"sigma", "clamp", "round"}, path)
    sigma = params.get("sigma")
    if not _is_num(sigma) or sigma < 0:
        raise ConfigError(f"{path}/sigma", "must be a non-negative number")
    clamp = params.get("clamp")
    if clamp is not None:
        if not (isinstance(clamp, list) and len(clamp) == 2 and all(map(_is_num, clamp))):
            raise ConfigError(f"{path}/clamp", "must be [lo, hi]")
        if clamp[0] > clamp[1]:
            raise ConfigError(f"{path}/clamp", "lo must not exceed hi")
        clamp = (clamp[0], clamp[1])
    rnd = params.get("round", False)
    if not isinstance(rnd, bool):
        raise ConfigError(f"{path}/round", "must be a boolean")
    return PerturbationParams(float(sigma), 0, clamp, rnd)


def _parse_column(entry: object, path: str, base_dir: Path) -> ColumnSpec:
    if not isinstance(entry, dict):
        raise ConfigError(path, "column entry must be an object")
    _check_keys(entry, _COLUMN_KEYS, path)
    for key in ("name", "class", "kind", "technique"):
        if key not in entry:
            raise ConfigError(f"{path}/{key}", "required")
    name = entry["name"]
    if not isinstance(name, str) or not name:
        raise ConfigError(f"{path}/name", "must be a non-empty string")
    attr = _enum(AttributeClass, entry["class"], f"{path}/class")
    kind = _enum(Kind, entry["kind"], f"{path}/kind")
    technique = _enum(Technique, entry["technique"], f"{path}/technique")
    if attr is AttributeClass.DIRECT_IDENTIFIER and technique is Technique.NONE:
        raise ConfigError(f"{path}/technique", "a direct identifier cannot be bound to 'none'")
    raw_params = entry.get("params", {})
    if not isinstance(raw_params, dict):
        raise ConfigError(f"{path}/params", "must be an object")
    params = _parse_params(technique, kind, raw_params, f"{path}/params")

    needs_hierarchy = (
        technique is Technique.GENERALIZE or attr is AttributeClass.QUASI_IDENTIFIER
    )
    hierarchy = None
    href = entry.get("hierarchy")
    if needs_hierarchy and href is None:
        raise ConfigError(f"{path}/hierarchy", "required for generalize or quasi_identifier columns")
    if not needs_hierarchy and href is not None:
        raise ConfigError(f"{path}/hierarchy", "only allowed for generalize or quasi_identifier columns")
    if href is not None:
        if not isinstance(href, str) or not href:
            raise ConfigError(f"{path}/hierarchy", "must be a file path")
        hpath = base_dir / href
        try:
            hierarchy = load_hierarchy(hpath)
        except OSError as exc:
            raise ConfigError(f"{path}/hierarchy", f"cannot read {hpath}: {exc.strerror}") from None
        except (HierarchyError, UnicodeDecodeError, csv.Error) as exc:
            raise ConfigError(f"{path}/hierarchy", f"invalid hierarchy {hpath}: {exc}") from None
        if technique is Technique.GENERALIZE and params > hierarchy.height:
            raise ConfigError(
                f"{path}/params/level",
                f"level {params} exceeds hierarchy height {hierarchy.height}",
            )
    return ColumnSpec(name, attr, kind, technique, params, hierarchy, href)


def parse_config(
    source: BinaryIO, base_dir: Union[str, os.PathLike, None] = None
) -> PipelineConfig:
    """Parse and validate a JSON pipeline config.

    Hierarchy paths are resolved against ``base_dir`` (default: the current
    directory) and loaded eagerly. Every rejection is a :class:`ConfigError`
    carrying the JSON-pointer path of the offending field.
    """
    base = Path(base_dir) if base_dir is not None else Path.cwd()
    try:
        doc = json.load(_text_reader(source))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError("/", f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("/", "top level must be an object")
    _check_keys(doc, _TOP_KEYS, "")

    seed = doc.get("seed")
    if seed is not None and (not _is_int(seed) or not 0 <= seed <= UINT64_MAX):
        raise ConfigError("/seed", "must be an unsigned 64-bit integer")
    k = doc.get("k", 5)
    if not _is_int(k) or k < 1:
        raise ConfigError("/k", "must be an integer >= 1")
    fraction = doc.get("max_suppression_fraction", 0.05)
    if not _is_num(fraction) or not 0 <= fraction <= 1:
        raise ConfigError("/max_suppression_fraction", "must be a number in [0, 1]")

    columns = doc.get("columns")
    if not isinstance(columns, list) or not columns:
        raise ConfigError("/columns", "must be a non-empty list")
    specs = []
    seen = set()
    for i, entry in enumerate(columns):
        spec = _parse_column(entry, f"/columns/{i}", base)
        if spec.name in seen:
            raise ConfigError(f"/columns/{i}/name", f"duplicate column {spec.name!r}")
        seen.add(spec.name)
        specs.append(spec)
    return PipelineConfig(tuple(specs), seed, k, float(fraction))


def load_config(path: Union[str, os.PathLike]) -> PipelineConfig:
    """Parse a config file, resolving hierarchy paths next to the file."""
    path = Path(path)
    with open(path, "rb") as fh:
        return parse_config(fh, base_dir=path.parent)
