"""Render an :class:`EvaluationReport` as a Markdown table, JSON or CSV."""

from __future__ import annotations

import csv
import enum
import io
import json

from .metrics import EvaluationReport


class RenderFormat(enum.Enum):
    MARKDOWN = "md"
    JSON = "json"
    CSV = "csv"


MARKDOWN_HEADER = "| Campo | Entr. Or. | Entr. An. | Perda (%) |\n|---|---|---|---|\n"

CSV_FIELDS = (
    "technique",
    "seed",
    "runtime_ms",
    "k_achieved",
    "suppressed_rows",
    "name",
    "status",
    "entropy_original_bits",
    "entropy_anonymized_bits",
    "loss_percent",
    "entropy_delta_bits",
)


def _md_cell(text: str) -> str:
    return text.replace("|", "\\|")


def render_markdown(report: EvaluationReport) -> str:
    lines = [MARKDOWN_HEADER]
    for c in report.columns:
        lines.append(
            f"| {_md_cell(c.name)} | {c.original_entropy_bits:.1f} | "
            f"{c.anonymized_entropy_bits:.1f} | {c.loss_percent:.1f}% |\n"
        )
    return "".join(lines)


def render_json(report: EvaluationReport) -> str:
    return json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n"


def render_csv(report: EvaluationReport) -> str:
    doc = report.to_dict()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    head = [doc[k] for k in CSV_FIELDS[:5]]
    for col in doc["columns"]:
        row = head + [col[k] for k in CSV_FIELDS[5:]]
        writer.writerow(["" if v is None else v for v in row])
    return buf.getvalue()


def render_report(report: EvaluationReport, fmt: RenderFormat | str = RenderFormat.MARKDOWN) -> str:
    fmt = RenderFormat(fmt)
    if fmt is RenderFormat.JSON:
        return render_json(report)
    if fmt is RenderFormat.CSV:
        return render_csv(report)
    return render_markdown(report)
