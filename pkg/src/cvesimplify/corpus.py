"""CVE corpus handling: record parsing, description cleaning, partitioning.

Records come from CVElistV5-format JSON documents. A corpus is stored as
JSON lines, one record per line, so it streams and diffs cleanly.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

CVE_ID_RE = re.compile(r"CVE-\d{4}-\d{4,}")

SPLIT_EVAL = "eval"
SPLIT_DEV = "dev"
SPLIT_UNASSIGNED = "unassigned"

# Automatic non-natural-language line detection. Ratio first, then the
# log/stack-trace patterns (a hexdump line is reported as symbol-ratio).
SYMBOL_RATIO_THRESHOLD = 0.4
REASON_SYMBOL_RATIO = "symbol-ratio"
REASON_LOG_PATTERN = "log-pattern"

_LOG_PATTERNS = [
    re.compile(r"^\s*\[?\d{4}-\d{2}-\d{2}[T ]\d{2}:\d{2}"),  # leading timestamp
    re.compile(r"^\s*\[?\d{2}:\d{2}:\d{2}"),
    re.compile(r"^\s*at\s+[\w$.<>/]+\("),  # stack-trace frame
    re.compile(r"^\s*>>>"),  # REPL prompt
    re.compile(r"(?:0x[0-9a-fA-F]+\s+){3,}"),  # hexdump run
    re.compile(r"(?:\b[0-9a-fA-F]{2}\s+){6,}"),
]


class MissingId(Exception):
    """Record has no cveMetadata.cveId, or the id is not CVE-YYYY-NNNN+."""


class NoEnglishDescription(Exception):
    """Record carries no description entry with an English language tag."""


class MalformedDocument(Exception):
    """Input is not a parseable CVE record document."""


class EmptyDescription(Exception):
    """Cleaning requires a non-empty raw description."""


class NotEnoughRecords(Exception):
    """Requested partition sizes exceed the corpus size."""


@dataclass(frozen=True)
class CveRecord:
    id: str
    raw_description: str
    cleaned_description: str
    removed_spans: list[tuple[int, int, str]] = field(default_factory=list)
    split: str = SPLIT_UNASSIGNED
    source_path: str = ""

    def reconstruct_raw(self) -> str:
        """Splice the removed spans back into the cleaned text."""
        out = []
        cursor = 0
        cleaned_pos = 0
        for start, end, _reason in sorted(self.removed_spans):
            keep = start - cursor
            out.append(self.cleaned_description[cleaned_pos : cleaned_pos + keep])
            cleaned_pos += keep
            out.append(self.raw_description[start:end])
            cursor = end
        out.append(self.cleaned_description[cleaned_pos:])
        return "".join(out)


@dataclass
class Corpus:
    records: list[CveRecord]
    seed: int | None = None

    def __len__(self) -> int:
        return len(self.records)

    def by_id(self, cve_id: str) -> CveRecord:
        for rec in self.records:
            if rec.id == cve_id:
                return rec
        raise KeyError(cve_id)


def parse_cve_record(raw: str | bytes, source_path: str = "") -> CveRecord:
    """Parse a single CVElistV5 record document.

    Takes the first description entry whose lang starts with "en"; the
    record's split starts out unassigned.
    """
    try:
        doc = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedDocument(f"{source_path or 'input'}: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedDocument(f"{source_path or 'input'}: expected a JSON object")

    cve_id = (doc.get("cveMetadata") or {}).get("cveId")
    if not cve_id:
        raise MissingId(f"{source_path or 'input'}: no cveMetadata.cveId")
    if not CVE_ID_RE.fullmatch(cve_id):
        raise MissingId(f"{source_path or 'input'}: cveId {cve_id!r} is not a CVE identifier")

    descriptions = ((doc.get("containers") or {}).get("cna") or {}).get("descriptions") or []
    text = None
    for entry in descriptions:
        if isinstance(entry, dict) and str(entry.get("lang", "")).lower().startswith("en"):
            text = entry.get("value", "")
            break
    if text is None:
        raise NoEnglishDescription(f"{cve_id}: no English description entry")

    return CveRecord(
        id=cve_id,
        raw_description=text,
        cleaned_description=text,
        removed_spans=[],
        split=SPLIT_UNASSIGNED,
        source_path=source_path,
    )


def _line_is_non_natural(line: str) -> str | None:
    """Return a removal reason if the line looks like non-natural language."""
    if not line:
        return None
    symbols = sum(1 for c in line if not c.isalpha() and not c.isspace())
    if symbols / len(line) > SYMBOL_RATIO_THRESHOLD:
        return REASON_SYMBOL_RATIO
    for pattern in _LOG_PATTERNS:
        if pattern.search(line):
            return REASON_LOG_PATTERN
    return None


def _excise(raw: str, spans: list[tuple[int, int, str]]) -> str:
    pieces = []
    cursor = 0
    for start, end, _reason in sorted(spans):
        pieces.append(raw[cursor:start])
        cursor = end
    pieces.append(raw[cursor:])
    return "".join(pieces)


def clean_description(
    rec: CveRecord,
    overrides: dict[str, list[tuple[int, int, str]]] | None = None,
) -> CveRecord:
    """Excise non-natural-language lines (log excerpts, hexdumps, traces).

    The automatic flagger works line by line; a manual override entry for
    the record's id replaces the automatic classification entirely, so a
    human pass can reproduce hand cleaning exactly. Records without an
    override entry still get the automatic treatment.
    """
    raw = rec.raw_description
    if not raw:
        raise EmptyDescription(rec.id)

    manual = overrides.get(rec.id) if overrides is not None else None
    if manual is not None:
        spans = [(int(s), int(e), str(r)) for s, e, r in manual]
        for start, end, _reason in spans:
            if not (0 <= start <= end <= len(raw)):
                raise ValueError(f"{rec.id}: span ({start},{end}) out of bounds")
    else:
        spans = []
        pos = 0
        for line in raw.splitlines(keepends=True):
            stripped = line.rstrip("\r\n")
            reason = _line_is_non_natural(stripped)
            if reason is not None:
                spans.append((pos, pos + len(line), reason))
            pos += len(line)

    spans.sort()
    for (s1, e1, _), (s2, _e2, _) in zip(spans, spans[1:]):
        if s2 < e1:
            raise ValueError(f"{rec.id}: overlapping removal spans at {s1} and {s2}")

    return replace(rec, cleaned_description=_excise(raw, spans), removed_spans=spans)


def partition_corpus(corpus: Corpus, eval_n: int, dev_n: int, seed: int) -> Corpus:
    """Deterministically mark eval_n records eval and dev_n records dev.

    The shuffle is keyed on the seed alone, so the same seed and input
    order always produce the same partition. Record order is preserved in
    the result; only the split labels change.
    """
    if eval_n < 0 or dev_n < 0:
        raise ValueError("partition sizes must be non-negative")
    if eval_n + dev_n > len(corpus.records):
        raise NotEnoughRecords(
            f"requested {eval_n}+{dev_n} records from a corpus of {len(corpus.records)}"
        )
    order = list(range(len(corpus.records)))
    random.Random(seed).shuffle(order)
    assignment = {}
    for rank, idx in enumerate(order):
        if rank < eval_n:
            assignment[idx] = SPLIT_EVAL
        elif rank < eval_n + dev_n:
            assignment[idx] = SPLIT_DEV
        else:
            assignment[idx] = SPLIT_UNASSIGNED
    records = [replace(rec, split=assignment[i]) for i, rec in enumerate(corpus.records)]
    return Corpus(records=records, seed=seed)


def record_to_json_line(rec: CveRecord) -> str:
    obj = {
        "id": rec.id,
        "raw": rec.raw_description,
        "cleaned": rec.cleaned_description,
        "removed_spans": [[s, e, r] for s, e, r in rec.removed_spans],
        "split": rec.split,
        "source_path": rec.source_path,
    }
    return json.dumps(obj, ensure_ascii=False)


def record_from_json_line(line: str) -> CveRecord:
    obj = json.loads(line)
    return CveRecord(
        id=obj["id"],
        raw_description=obj["raw"],
        cleaned_description=obj["cleaned"],
        removed_spans=[(int(s), int(e), str(r)) for s, e, r in obj.get("removed_spans", [])],
        split=obj.get("split", SPLIT_UNASSIGNED),
        source_path=obj.get("source_path", ""),
    )


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    ids = set()
    for rec in corpus.records:
        if rec.id in ids:
            raise ValueError(f"duplicate record id {rec.id}")
        ids.add(rec.id)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for rec in corpus.records:
            f.write(record_to_json_line(rec) + "\n")


def load_corpus(path: str | Path) -> Corpus:
    records = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                records.append(record_from_json_line(line))
    return Corpus(records=records)


def load_overrides(path: str | Path) -> dict[str, list[tuple[int, int, str]]]:
    """Manual override file: JSON lines of {id, spans: [[start, end, reason]]}."""
    overrides: dict[str, list[tuple[int, int, str]]] = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            overrides[obj["id"]] = [(int(s), int(e), str(r)) for s, e, r in obj["spans"]]
    return overrides
