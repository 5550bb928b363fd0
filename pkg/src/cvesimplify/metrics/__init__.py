"""Evaluation metrics: n-gram edit scores, readability, meaning preservation,
named-entity statistics, and report aggregation."""

from .meaning import (
    BertScoreResult,
    EmbeddingProvider,
    EmptySequence,
    ProviderFailure,
    bertscore,
    semantic_similarity,
)
from .readability import NoWords, ReadabilityStats, readability
from .report import (
    COLUMN_ORDER,
    EmptyInput,
    MetricReport,
    NeStats,
    aggregate_report,
    markdown_tables,
    ne_stats,
    per_doc_csv,
    system_csv,
)
from .sari import DsariResult, EmptyReference, SariBreakdown, dsari, sari_components

__all__ = [
    "BertScoreResult",
    "COLUMN_ORDER",
    "DsariResult",
    "EmbeddingProvider",
    "EmptyInput",
    "EmptyReference",
    "EmptySequence",
    "MetricReport",
    "NeStats",
    "NoWords",
    "ProviderFailure",
    "ReadabilityStats",
    "SariBreakdown",
    "aggregate_report",
    "bertscore",
    "dsari",
    "markdown_tables",
    "ne_stats",
    "per_doc_csv",
    "readability",
    "sari_components",
    "semantic_similarity",
    "system_csv",
]
