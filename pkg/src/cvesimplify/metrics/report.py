"""Per-document metric rows, system-level aggregation, and table emitters.

System-level values are plain arithmetic means of the per-document values.
Tables group columns the way the result tables are usually presented:
reference-based scores, meaning preservation, simplicity. CSV keeps full
precision; the Markdown rendering rounds to two decimals.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Callable, Sequence

# Canonical column order; a report carries whatever subset was computed.
REFERENCE_COLUMNS = ["d_sari", "d_keep", "d_add", "d_del", "f_keep", "f_add", "p_del", "lp", "slp"]
MEANING_COLUMNS = [
    "bertscore_precision",
    "bertscore_recall",
    "bertscore_f1",
    "semantic_similarity",
]
SIMPLICITY_COLUMNS = ["fkgl", "words", "sentences", "syllables_per_word", "named_entities"]
COLUMN_ORDER = REFERENCE_COLUMNS + MEANING_COLUMNS + SIMPLICITY_COLUMNS

_MARKDOWN_GROUPS = [
    ("Reference-based scores", [("d_sari", "D-SARI")]),
    (
        "Meaning preservation",
        [("bertscore_f1", "BERTScore"), ("semantic_similarity", "Semantic similarity")],
    ),
    (
        "Simplicity",
        [
            ("fkgl", "FKGL"),
            ("words", "Avg words"),
            ("sentences", "Avg sentences"),
            ("syllables_per_word", "Avg syllables per word"),
            ("named_entities", "Avg named entities"),
        ],
    ),
]


class EmptyInput(Exception):
    """Aggregation needs at least one row."""


@dataclass(frozen=True)
class NeStats:
    counts: list[int]
    mean: float


@dataclass(frozen=True)
class MetricReport:
    columns: list[str]
    rows: list[dict]  # each: {"id": str, <column>: float, ...}
    means: dict[str, float]


def ne_stats(docs: Sequence[str], extractor: Callable[[str], list]) -> NeStats:
    """Count extracted term mentions per document and their mean."""
    counts = [len(extractor(doc)) for doc in docs]
    mean = sum(counts) / len(counts) if counts else 0.0
    return NeStats(counts=counts, mean=mean)


def aggregate_report(per_doc_rows: Sequence[dict]) -> MetricReport:
    """Arithmetic means per metric column over per-document rows."""
    rows = list(per_doc_rows)
    if not rows:
        raise EmptyInput("no per-document rows to aggregate")
    columns_present = {k for k in rows[0] if k != "id"}
    for row in rows[1:]:
        if {k for k in row if k != "id"} != columns_present:
            raise ValueError("all rows must carry the same metric columns")
    columns = [c for c in COLUMN_ORDER if c in columns_present]
    columns += sorted(columns_present - set(columns))
    means = {c: sum(float(r[c]) for r in rows) / len(rows) for c in columns}
    return MetricReport(columns=columns, rows=rows, means=means)


def _fmt_full(value: float) -> str:
    return repr(float(value))


def per_doc_csv(report: MetricReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id"] + report.columns)
    for row in report.rows:
        writer.writerow([row["id"]] + [_fmt_full(row[c]) for c in report.columns])
    return buf.getvalue()


def system_csv(summaries: dict[str, dict[str, float]]) -> str:
    """One row per system; columns are the union of computed metrics."""
    present: set[str] = set()
    for means in summaries.values():
        present.update(means)
    columns = [c for c in COLUMN_ORDER if c in present]
    columns += sorted(present - set(columns))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["system"] + columns)
    for label, means in summaries.items():
        writer.writerow([label] + [_fmt_full(means[c]) if c in means else "" for c in columns])
    return buf.getvalue()


def markdown_tables(summaries: dict[str, dict[str, float]]) -> str:
    """System-level results as three grouped Markdown tables."""
    sections = []
    for title, group in _MARKDOWN_GROUPS:
        cols = [(key, header) for key, header in group if any(key in m for m in summaries.values())]
        if not cols:
            continue
        lines = [f"## {title}", ""]
        lines.append("| System | " + " | ".join(h for _, h in cols) + " |")
        lines.append("|" + "---|" * (len(cols) + 1))
        for label, means in summaries.items():
            cells = [f"{means[k]:.2f}" if k in means else "" for k, _ in cols]
            lines.append(f"| {label} | " + " | ".join(cells) + " |")
        sections.append("\n".join(lines))
    return "\n\n".join(sections) + "\n"
