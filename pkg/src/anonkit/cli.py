"""``anonkit`` command-line interface.

Exit codes::

    0  success (verify-k: dataset is k-anonymous)
    1  verify-k: dataset is not k-anonymous
    2  invalid command-line usage
    3  invalid pipeline config
    4  invalid data (CSV parse error, schema mismatch, unknown column)
    5  invalid generalization hierarchy
    6  transform failed (kind mismatch, value not covered by a group or hierarchy)
    7  k-anonymity infeasible within the suppression budget
    8  I/O error
    9  other anonkit error
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .dataset import Dataset
from .errors import (
    AnonkitError,
    ConfigError,
    HierarchyError,
    InfeasibleK,
    KindMismatch,
    LevelOutOfRange,
    ParseError,
    SchemaMismatch,
    UncoveredValue,
    UnknownColumn,
    UnknownValue,
)
from .io import load_config, read_csv, read_csv_text, write_csv
from .kanon import KAnonConfig, equivalence_classes, k_anonymize
from .metrics import EvaluationReport, evaluate, measure
from .report import RenderFormat, render_json, render_markdown, render_report
from .synth import GeneratorSpec, Profile, Variant, column_names, generate
from .techniques import PipelineConfig, Technique, apply_pipeline

logger = logging.getLogger("anonkit")

EXIT_OK = 0
EXIT_NOT_ANONYMOUS = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_DATA = 4
EXIT_HIERARCHY = 5
EXIT_TRANSFORM = 6
EXIT_INFEASIBLE = 7
EXIT_IO = 8
EXIT_OTHER = 9

_EXIT_CODES = (
    (ConfigError, EXIT_CONFIG),
    ((ParseError, SchemaMismatch, UnknownColumn), EXIT_DATA),
    (HierarchyError, EXIT_HIERARCHY),
    ((KindMismatch, UncoveredValue, UnknownValue, LevelOutOfRange), EXIT_TRANSFORM),
    (InfeasibleK, EXIT_INFEASIBLE),
    (AnonkitError, EXIT_OTHER),
)

TECHNIQUES = ("aggregate", "generalize", "perturb", "kanon")
SEED_ENV = "ANONKIT_SEED"


def exit_code_for(exc: BaseException) -> int:
    for types, code in _EXIT_CODES:
        if isinstance(exc, types):
            return code
    if isinstance(exc, OSError):
        return EXIT_IO
    raise exc


def env_seed() -> Optional[int]:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"${SEED_ENV}", f"not an integer: {raw!r}") from None
    if not 0 <= value < 1 << 64:
        raise ConfigError(f"${SEED_ENV}", "must be an unsigned 64-bit integer")
    return value


def resolve_seed(cli: Optional[int], config: Optional[int] = None) -> int:
    """Seed precedence: --seed, then the config, then $ANONKIT_SEED, then 0."""
    for candidate in (cli, config, env_seed()):
        if candidate is not None:
            return candidate
    return 0


def bundled_config(name: str) -> Optional[Path]:
    """Path of a reference config shipped with the package, if it exists."""
    stem = name if name.endswith(".json") else f"{name}.json"
    path = Path(str(resources.files("anonkit") / "data" / "configs" / stem))
    return path if path.is_file() else None


def resolve_config(arg: str) -> Path:
    path = Path(arg)
    if path.exists():
        return path
    bundled = bundled_config(path.name) if path.parent == Path(".") else None
    if bundled is not None:
        logger.info("using bundled config %s", bundled)
        return bundled
    raise FileNotFoundError(2, "No such file or directory", arg)


def _variant_for(config: PipelineConfig) -> tuple[Variant, bool]:
    wanted = set(config.names)
    for variant in Variant:
        for with_age in (False, True):
            if set(column_names(variant, with_age)) == wanted:
                return variant, with_age
    raise SchemaMismatch(
        "config columns do not match any generated variant; pass --input with a CSV file"
    )


def _write_text(path: Path, text: str) -> None:
    path.write_bytes(text.encode("utf-8"))


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


def run_technique(
    original: Dataset,
    config: PipelineConfig,
    technique: str,
    k: Optional[int] = None,
) -> tuple[Dataset, EvaluationReport]:
    """Anonymize ``original`` with one technique and evaluate the result."""
    stages: dict[str, float] = {}
    achieved_k = suppressed = None
    if technique == "kanon":
        # identifier bindings only; every other column passes through
        (stage1, _), stages["pipeline"] = measure(apply_pipeline, original, config, Technique.NONE)
        kcfg = KAnonConfig.from_pipeline(config, k)
        present = tuple(q for q in kcfg.qi if q in stage1)
        kcfg = replace(kcfg, qi=present)
        result, stages["k_anonymize"] = measure(k_anonymize, stage1, kcfg)
        anonymized = result.dataset
        achieved_k, suppressed = result.achieved_k, result.suppressed_rows
    else:
        (anonymized, _), stages["pipeline"] = measure(
            apply_pipeline, original, config, Technique(technique)
        )
    report, stages["evaluate"] = measure(
        evaluate, original, anonymized, technique,
        achieved_k=achieved_k, suppressed_rows=suppressed, seed=config.seed,
    )
    return anonymized, replace(report, runtime_ms=sum(stages.values()), stage_ms=stages)


def _markdown_document(report: EvaluationReport) -> str:
    lines = [f"# anonkit: {report.technique}", ""]
    lines.append(f"- seed: {report.seed}")
    if report.achieved_k is not None:
        lines.append(f"- k achieved: {report.achieved_k}")
        lines.append(f"- suppressed rows: {report.suppressed_rows}")
    if report.runtime_ms is not None:
        stages = ", ".join(f"{k} {v:.1f} ms" for k, v in report.stage_ms.items())
        lines.append(f"- runtime: {report.runtime_ms:.1f} ms ({stages})")
    return "\n".join(lines) + "\n\n" + render_markdown(report)


def _cmd_run(args: argparse.Namespace) -> int:
    config_path = resolve_config(args.config)
    config = load_config(config_path)
    config = replace(config, seed=resolve_seed(args.seed, config.seed))

    if args.input:
        with open(args.input, "rb") as fh:
            original, load_ms = measure(read_csv, fh, config)
    else:
        variant, with_age = _variant_for(config)
        gspec = GeneratorSpec(args.n, config.seed, variant, Profile(args.profile), with_age)
        original, load_ms = measure(generate, gspec)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    techniques = TECHNIQUES if args.technique == "all" else (args.technique,)
    for technique in techniques:
        anonymized, report = run_technique(original, config, technique, args.k)
        stages = {"load": load_ms, **report.stage_ms}
        report = replace(report, stage_ms=stages, runtime_ms=sum(stages.values()))
        target = out / technique if len(techniques) > 1 else out
        target.mkdir(parents=True, exist_ok=True)
        with open(target / "anonymized.csv", "wb") as fh:
            write_csv(anonymized, fh)
        # runtime is left out of report.json so identical runs give identical bytes
        stored = report if args.record_runtime else replace(report, runtime_ms=None)
        _write_text(target / "report.json", render_json(stored))
        _write_text(target / "report.md", _markdown_document(report))
        removed = sum(1 for c in report.columns if c.status.value == "removed_by_anonymization")
        extra = f", k={report.achieved_k}, suppressed={report.suppressed_rows}" if technique == "kanon" else ""
        print(
            f"{technique}: {anonymized.row_count} rows, {len(report.columns)} columns "
            f"({removed} removed){extra}, {report.runtime_ms:.1f} ms -> {target}"
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# generate / evaluate / verify-k
# ---------------------------------------------------------------------------


def _cmd_generate(args: argparse.Namespace) -> int:
    spec = GeneratorSpec(
        n=args.n,
        seed=resolve_seed(args.seed),
        variant=Variant(args.variant),
        profile=Profile(args.profile),
        with_age=args.with_age,
    )
    dataset = generate(spec)
    if args.out == "-":
        write_csv(dataset, sys.stdout.buffer)
    else:
        with open(args.out, "wb") as fh:
            write_csv(dataset, fh)
    return EXIT_OK


def _cmd_evaluate(args: argparse.Namespace) -> int:
    config = load_config(resolve_config(args.schema))
    with open(args.original, "rb") as fh:
        original = read_csv(fh, config)
    classes = {c.name: c.attribute_class for c in config.columns}
    with open(args.anonymized, "rb") as fh:
        anonymized = read_csv_text(fh, classes)
    report = evaluate(original, anonymized, args.label, seed=resolve_seed(args.seed, config.seed))
    sys.stdout.write(render_report(report, RenderFormat(args.format)))
    return EXIT_OK


def _cmd_verify_k(args: argparse.Namespace) -> int:
    with open(args.input, "rb") as fh:
        dataset = read_csv_text(fh)
    qi = [q.strip() for q in args.qi.split(",") if q.strip()]
    classes = equivalence_classes(dataset, qi)
    smallest = min((ec.size for ec in classes), default=0)
    ok = smallest >= args.k or not classes
    print(
        f"{'k-anonymous' if ok else 'NOT k-anonymous'} at k={args.k}: "
        f"{len(classes)} classes, smallest {smallest}, {dataset.row_count} rows"
    )
    return EXIT_OK if ok else EXIT_NOT_ANONYMOUS


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anonkit",
        description="Anonymize tabular CSV data and measure entropy-based information loss.",
        epilog=__doc__.split("\n\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"anonkit {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    seed_help = f"random seed (default: config seed, then ${SEED_ENV}, then 0)"

    p = sub.add_parser("generate", help="write a synthetic dataset")
    p.add_argument("--n", type=_positive_int, default=250)
    p.add_argument("--seed", type=_seed, help=seed_help)
    p.add_argument("--variant", choices=[v.value for v in Variant], default="sensitive")
    p.add_argument("--profile", choices=[v.value for v in Profile], default="replication")
    p.add_argument("--with-age", action="store_true", help="add an integer Idade column")
    p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("run", help="anonymize and evaluate")
    p.add_argument("--config", required=True,
                   help="pipeline config JSON (bundled: ref_personal, ref_sensitive, ref_perturb)")
    p.add_argument("--input", help="input CSV (default: generate data matching the config)")
    p.add_argument("--technique", choices=TECHNIQUES + ("all",), default="all")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=_seed, help=seed_help)
    p.add_argument("--k", type=_positive_int, help="override the config's k (kanon only)")
    p.add_argument("--n", type=_positive_int, default=250, help="rows to generate")
    p.add_argument("--profile", choices=[v.value for v in Profile], default="replication")
    p.add_argument("--record-runtime", action="store_true",
                   help="store runtime_ms in report.json (output no longer byte-reproducible)")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("evaluate", help="compare an original and an anonymized CSV")
    p.add_argument("--original", required=True)
    p.add_argument("--anonymized", required=True)
    p.add_argument("--schema", required=True, help="pipeline config describing the original")
    p.add_argument("--format", choices=[f.value for f in RenderFormat], default="md")
    p.add_argument("--label", default="evaluate", help="technique label for the report")
    p.add_argument("--seed", type=_seed, help=seed_help)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("verify-k", help="check k-anonymity of a CSV (exit 0 iff satisfied)")
    p.add_argument("--input", required=True)
    p.add_argument("--qi", required=True, help="comma-separated quasi-identifier columns")
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--seed", type=_seed, help="accepted for uniformity; unused")
    p.set_defaults(func=_cmd_verify_k)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (AnonkitError, OSError) as exc:
        code = exit_code_for(exc)
        print(f"anonkit: error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
