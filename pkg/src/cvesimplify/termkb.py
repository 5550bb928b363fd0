"""Term extraction and retrieval-augmented term explanation.

Terms are found either by scanning a cybersecurity lexicon (default, fully
offline) or by calling an external NER service whose output is filtered to
the five labels that matter for understandability. Explanations are only
ever generated from retrieved lexicon evidence: a term with no evidence is
passed through unexplained rather than guessed at.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import httpx

ALLOWED_LABELS = frozenset({"CON", "MALWARE", "TACTIC", "TECHNIQUE", "TOOL"})
DEFAULT_LABEL = "CON"

BM25_K1 = 1.2
BM25_B = 0.75

_TOKEN_RE = re.compile(r"[a-z0-9]+")


class DuplicateTerm(Exception):
    """Two lexicon entries share a canonical term."""


class NerUnavailable(Exception):
    """The NER endpoint is configured but cannot be reached."""


class LlmUnavailable(Exception):
    """No chat client is configured for explanation generation."""


@dataclass(frozen=True)
class TermMention:
    surface: str
    label: str
    span: tuple[int, int]
    source: str  # "lexicon" or "ner"


@dataclass(frozen=True)
class LexiconEntry:
    term: str
    aliases: list[str] = field(default_factory=list)
    definition: str = ""
    source: str = ""
    label: str | None = None


@dataclass
class TermExplanation:
    term: str
    explanation: str
    evidence: list[LexiconEntry]
    explained: bool
    error: str | None = None


def load_lexicon(path: str | Path) -> list[LexiconEntry]:
    """Lexicon file: JSON lines of {term, aliases, definition, source, label?}."""
    entries = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            label = obj.get("label")
            if label is not None and label not in ALLOWED_LABELS:
                raise ValueError(f"lexicon entry {obj.get('term')!r}: unknown label {label!r}")
            entries.append(
                LexiconEntry(
                    term=obj["term"],
                    aliases=list(obj.get("aliases", [])),
                    definition=obj["definition"],
                    source=obj.get("source", ""),
                    label=label,
                )
            )
    return entries


def _is_word_char(c: str) -> bool:
    return c.isalnum() or c == "_"


class LexiconMatcher:
    """Longest-match, case-insensitive scan over lexicon terms and aliases.

    Matches are constrained to word boundaries, so "malware" does not fire
    inside "antimalware". Overlaps resolve leftmost-longest.
    """

    def __init__(self, entries: list[LexiconEntry]):
        self._surface_to_entry: dict[str, LexiconEntry] = {}
        for entry in entries:
            for surface in [entry.term, *entry.aliases]:
                key = surface.casefold()
                if key and key not in self._surface_to_entry:
                    self._surface_to_entry[key] = entry
        # Longest surfaces first so the regex alternation prefers them.
        surfaces = sorted(self._surface_to_entry, key=len, reverse=True)
        if surfaces:
            pattern = "|".join(re.escape(s) for s in surfaces)
            self._pattern = re.compile(pattern, re.IGNORECASE)
        else:
            self._pattern = None

    def find(self, text: str) -> list[TermMention]:
        if self._pattern is None or not text:
            return []
        mentions = []
        pos = 0
        while pos < len(text):
            m = self._pattern.search(text, pos)
            if m is None:
                break
            start, end = m.start(), m.end()
            at_left = start == 0 or not _is_word_char(text[start - 1])
            at_right = end == len(text) or not _is_word_char(text[end])
            if at_left and at_right:
                entry = self._surface_to_entry[m.group(0).casefold()]
                mentions.append(
                    TermMention(
                        surface=text[start:end],
                        label=entry.label or DEFAULT_LABEL,
                        span=(start, end),
                        source="lexicon",
                    )
                )
                pos = end
            else:
                pos = start + 1
        return mentions


class NerClient:
    """Client for an external NER endpoint.

    POSTs {"text": ...} and expects an array of
    {"start", "end", "label", "surface"}; mentions outside the allowed
    label set are dropped.
    """

    def __init__(self, base_url: str, timeout: float = 30.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout

    def extract(self, text: str) -> list[TermMention]:
        try:
            response = httpx.post(self.base_url, json={"text": text}, timeout=self.timeout)
            response.raise_for_status()
            payload = response.json()
        except (httpx.HTTPError, json.JSONDecodeError) as exc:
            raise NerUnavailable(f"NER endpoint {self.base_url}: {exc}") from exc
        mentions = []
        try:
            for item in payload:
                if item.get("label") not in ALLOWED_LABELS:
                    continue
                start, end = int(item["start"]), int(item["end"])
                mentions.append(
                    TermMention(
                        surface=item.get("surface", text[start:end]),
                        label=item["label"],
                        span=(start, end),
                        source="ner",
                    )
                )
        except (AttributeError, KeyError, TypeError, ValueError) as exc:
            raise NerUnavailable(f"NER endpoint {self.base_url}: malformed response") from exc
        return mentions


def _merge_non_overlapping(primary: list[TermMention], extra: list[TermMention]) -> list[TermMention]:
    taken = list(primary)
    for mention in sorted(extra, key=lambda m: (m.span[0], -(m.span[1] - m.span[0]))):
        s, e = mention.span
        if all(e <= t.span[0] or s >= t.span[1] for t in taken):
            taken.append(mention)
    return sorted(taken, key=lambda m: m.span)


def extract_terms(
    doc_text: str,
    strategy: str = "lexicon",
    matcher: LexiconMatcher | None = None,
    ner: NerClient | None = None,
) -> list[TermMention]:
    """Extract term mentions with the given strategy.

    lexicon: scan the lexicon matcher. ner: call the NER endpoint. union:
    both, with lexicon matches winning span conflicts. Output is sorted by
    span start and never overlaps.
    """
    if strategy not in ("lexicon", "ner", "union"):
        raise ValueError(f"unknown extraction strategy {strategy!r}")
    if strategy in ("lexicon", "union") and matcher is None:
        raise ValueError("lexicon strategy requires a matcher")
    if strategy in ("ner", "union") and ner is None:
        raise ValueError("ner strategy requires a configured NER endpoint")

    if strategy == "lexicon":
        return matcher.find(doc_text)
    if strategy == "ner":
        return sorted(ner.extract(doc_text), key=lambda m: m.span)
    lexicon_mentions = matcher.find(doc_text)
    ner_mentions = ner.extract(doc_text)
    return _merge_non_overlapping(lexicon_mentions, ner_mentions)


def _bm25_tokens(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.casefold())


class LexiconIndex:
    """Inverted token index over term + aliases + definition text, scored
    with BM25 (k1=1.2, b=0.75, non-negative idf variant)."""

    def __init__(self, entries: list[LexiconEntry]):
        seen: dict[str, str] = {}
        for entry in entries:
            key = entry.term.casefold()
            if key in seen:
                raise DuplicateTerm(f"duplicate canonical term {entry.term!r}")
            seen[key] = entry.term
        self.entries = list(entries)
        self._doc_tokens = [
            _bm25_tokens(" ".join([e.term, *e.aliases, e.definition])) for e in self.entries
        ]
        self._doc_len = [len(toks) for toks in self._doc_tokens]
        self._avg_len = (sum(self._doc_len) / len(self._doc_len)) if self.entries else 0.0
        self._tf = [Counter(toks) for toks in self._doc_tokens]
        self._postings: dict[str, list[int]] = {}
        for i, tf in enumerate(self._tf):
            for token in tf:
                self._postings.setdefault(token, []).append(i)
        n = len(self.entries)
        self._idf = {
            token: math.log((n - len(docs) + 0.5) / (len(docs) + 0.5) + 1.0)
            for token, docs in self._postings.items()
        }
        self._exact: dict[str, list[int]] = {}
        for i, entry in enumerate(self.entries):
            for surface in [entry.term, *entry.aliases]:
                self._exact.setdefault(surface.casefold(), []).append(i)

    def __len__(self) -> int:
        return len(self.entries)

    def scores(self, query: str) -> dict[int, float]:
        scores: dict[int, float] = {}
        for token in _bm25_tokens(query):
            idf = self._idf.get(token)
            if idf is None:
                continue
            for i in self._postings[token]:
                tf = self._tf[i][token]
                denom = tf + BM25_K1 * (1 - BM25_B + BM25_B * self._doc_len[i] / self._avg_len)
                scores[i] = scores.get(i, 0.0) + idf * tf * (BM25_K1 + 1) / denom
        return scores

    def retrieve(self, query_term: str, k: int = 3) -> list[LexiconEntry]:
        """Top-k entries; an exact term/alias match always ranks first,
        ties break on the lexicographically smaller canonical term."""
        scores = self.scores(query_term)
        exact = set(self._exact.get(query_term.casefold(), []))
        candidates = set(scores) | exact
        ranked = sorted(
            candidates,
            key=lambda i: (
                0 if i in exact else 1,
                -scores.get(i, 0.0),
                self.entries[i].term,
            ),
        )
        return [self.entries[i] for i in ranked[:k]]


def index_lexicon(entries: list[LexiconEntry]) -> LexiconIndex:
    return LexiconIndex(entries)


def retrieve(index: LexiconIndex, query_term: str, k: int = 3) -> list[LexiconEntry]:
    return index.retrieve(query_term, k=k)


EXPLAIN_PROMPT = (
    "Explain the term \"{term}\" in one plain sentence for a reader without "
    "cybersecurity expertise. Use only the definitions below; do not add facts "
    "that are not in them.\n\nDefinitions:\n{definitions}"
)


def render_explain_prompt(term: str, evidence: list[LexiconEntry]) -> str:
    definitions = "\n".join(
        f"- {e.term}: {e.definition}" + (f" [{e.source}]" if e.source else "") for e in evidence
    )
    return EXPLAIN_PROMPT.format(term=term, definitions=definitions)


def _explain_one(term: str, index: LexiconIndex, llm, k: int) -> TermExplanation:
    evidence = index.retrieve(term, k=k)
    if not evidence:
        return TermExplanation(term=term, explanation="", evidence=[], explained=False)
    prompt = render_explain_prompt(term, evidence)
    try:
        text = llm.chat([{"role": "user", "content": prompt}])
    except Exception as exc:
        return TermExplanation(
            term=term, explanation="", evidence=evidence, explained=False, error=str(exc)
        )
    return TermExplanation(term=term, explanation=text, evidence=evidence, explained=True)


def explain_terms(
    mentions: list[TermMention],
    index: LexiconIndex,
    llm,
    k: int = 3,
    max_parallel: int = 1,
) -> list[TermExplanation]:
    """Explain each unique mentioned term from retrieved lexicon evidence.

    Terms without evidence stay unexplained; a generation failure is
    recorded on the item instead of aborting the batch.
    """
    if llm is None:
        raise LlmUnavailable("no chat client configured for term explanation")
    unique_terms: list[str] = []
    seen = set()
    for mention in mentions:
        key = mention.surface.casefold()
        if key not in seen:
            seen.add(key)
            unique_terms.append(mention.surface)
    if not unique_terms:
        return []
    if max_parallel > 1 and len(unique_terms) > 1:
        with ThreadPoolExecutor(max_workers=max_parallel) as pool:
            return list(pool.map(lambda t: _explain_one(t, index, llm, k), unique_terms))
    return [_explain_one(term, index, llm, k) for term in unique_terms]


class TermKb:
    """Bundle of lexicon matcher, retrieval index, and optional NER client."""

    def __init__(self, entries: list[LexiconEntry], ner: NerClient | None = None):
        self.entries = entries
        self.matcher = LexiconMatcher(entries)
        self.index = index_lexicon(entries)
        self.ner = ner

    def extract(self, text: str, strategy: str = "lexicon") -> list[TermMention]:
        return extract_terms(text, strategy=strategy, matcher=self.matcher, ner=self.ner)
