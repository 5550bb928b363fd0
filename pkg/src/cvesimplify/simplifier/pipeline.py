"""Simplification modes, refusal fallback, the agent pipeline, and the
round-2 resimplification package.

Three modes produce a SimplificationVersion: sentence (one chat call per
sentence, aligned 1:1 with the original), document (one call for the whole
text), and agent (document call with retrieved term explanations as
support). When the model refuses, the corresponding original text is
substituted verbatim and the version is flagged rather than dropped.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ..corpus import CveRecord
from ..termkb import TermExplanation, TermKb, NerUnavailable, render_explain_prompt
from ..textproc import split_sentences
from .client import ChatClient, chat, _ChatCallable
from .prompts import (
    AGENT_PROMPT,
    DOCUMENT_PROMPT,
    ROUND2_INSTRUCTIONS,
    SENTENCE_PROMPT,
    load_prompt,
    render_prompt,
)

MODE_SENTENCE = "sentence"
MODE_DOCUMENT = "document"
MODE_AGENT = "agent"

FLAG_REFUSAL_FALLBACK = "refusal_fallback"
FLAG_NO_CHANGE = "no_change"
FLAG_FIDELITY_VIOLATION = "fidelity_violation"


class WrongRound(Exception):
    """Round-2 package built from a version that is not round 1."""


class EmptyDocument(Exception):
    """Record has no cleaned text to simplify."""


@dataclass(frozen=True)
class SimplificationVersion:
    cve_id: str
    round: int
    mode: str
    model_id: str
    prompt_id: str
    text: str
    # Sentence mode only: ((start, end) span in the original, simplified text),
    # one pair per original sentence, in order.
    sentence_alignment: tuple[tuple[tuple[int, int], str], ...] | None = None
    flags: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.round < 1:
            raise ValueError("round must be >= 1")
        if self.mode not in (MODE_SENTENCE, MODE_DOCUMENT, MODE_AGENT):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == MODE_SENTENCE and self.sentence_alignment is None:
            raise ValueError("sentence mode requires an alignment")


def _require_text(rec: CveRecord) -> str:
    if not rec.cleaned_description.strip():
        raise EmptyDocument(f"{rec.id}: no cleaned text to simplify")
    return rec.cleaned_description


def simplify_sentencewise(
    rec: CveRecord,
    client: ChatClient,
    round_number: int = 1,
    prompt_id: str = SENTENCE_PROMPT,
) -> SimplificationVersion:
    """Simplify one sentence at a time, keeping the outputs aligned with the
    original sentences. A refusal substitutes the original sentence verbatim."""
    cleaned = _require_text(rec)
    split = split_sentences(cleaned)
    alignment = []
    flags = set()
    # Sequential per-sentence calls keep alignment order deterministic.
    for start, end in split.spans:
        sentence = cleaned[start:end]
        prompt = render_prompt(prompt_id, sentence=sentence)
        reply = chat(client, [{"role": "user", "content": prompt}])
        if reply.refusal:
            output = sentence
            flags.add(FLAG_REFUSAL_FALLBACK)
        else:
            output = reply.text.strip()
        alignment.append(((start, end), output))
    if all(output == cleaned[s:e] for (s, e), output in alignment):
        flags.add(FLAG_NO_CHANGE)
    return SimplificationVersion(
        cve_id=rec.id,
        round=round_number,
        mode=MODE_SENTENCE,
        model_id=client.model_id,
        prompt_id=prompt_id,
        text=" ".join(output for _, output in alignment),
        sentence_alignment=tuple(alignment),
        flags=frozenset(flags),
    )


def _render_explanations(term_explanations: list[TermExplanation]) -> str:
    return "\n".join(
        f"- {e.term}: {e.explanation}" for e in term_explanations if e.explained
    )


def simplify_document(
    rec: CveRecord,
    client: ChatClient,
    term_explanations: list[TermExplanation] | None = None,
    round_number: int = 1,
    prompt_id: str | None = None,
) -> SimplificationVersion:
    """One chat call for the whole description. Supplying term explanations
    switches to the agent prompt, which presents them as support material."""
    cleaned = _require_text(rec)
    if term_explanations is None:
        mode = MODE_DOCUMENT
        prompt_id = prompt_id or DOCUMENT_PROMPT
        prompt = render_prompt(prompt_id, document=cleaned)
    else:
        mode = MODE_AGENT
        prompt_id = prompt_id or AGENT_PROMPT
        prompt = render_prompt(
            prompt_id, document=cleaned, explanations=_render_explanations(term_explanations)
        )
    reply = chat(client, [{"role": "user", "content": prompt}])
    flags = set()
    if reply.refusal:
        text = cleaned
        flags.add(FLAG_REFUSAL_FALLBACK)
    else:
        text = reply.text.strip()
    if text == cleaned:
        flags.add(FLAG_NO_CHANGE)
    return SimplificationVersion(
        cve_id=rec.id,
        round=round_number,
        mode=mode,
        model_id=client.model_id,
        prompt_id=prompt_id,
        text=text,
        flags=frozenset(flags),
    )


def run_agent_pipeline(
    rec: CveRecord,
    kb: TermKb,
    client: ChatClient,
    strategy: str = "lexicon",
    k: int = 3,
    audit_dir: str | Path | None = None,
) -> SimplificationVersion:
    """Full agent flow: extract term mentions, explain them from lexicon
    evidence, then simplify the document with the explanations as support.

    A failing NER endpoint degrades to lexicon-only extraction with a
    recorded warning. All intermediate artifacts (mentions, explanations,
    prompts) are persisted when audit_dir is given.
    """
    cleaned = _require_text(rec)
    warnings = []
    strategy_used = strategy
    try:
        mentions = kb.extract(cleaned, strategy=strategy)
    except NerUnavailable as exc:
        if strategy == "lexicon":
            raise
        strategy_used = "lexicon"
        warnings.append(f"NER unavailable, fell back to lexicon extraction: {exc}")
        mentions = kb.extract(cleaned, strategy="lexicon")

    from ..termkb import explain_terms

    explanations = explain_terms(mentions, kb.index, _ChatCallable(client), k=k)
    version = simplify_document(
        rec, client, term_explanations=explanations, round_number=1
    )

    if audit_dir is not None:
        audit = {
            "cve_id": rec.id,
            "strategy_requested": strategy,
            "strategy_used": strategy_used,
            "warnings": warnings,
            "mentions": [
                {
                    "surface": m.surface,
                    "label": m.label,
                    "span": list(m.span),
                    "source": m.source,
                }
                for m in mentions
            ],
            "explanations": [
                {
                    "term": e.term,
                    "explanation": e.explanation,
                    "explained": e.explained,
                    "error": e.error,
                    "evidence_terms": [entry.term for entry in e.evidence],
                }
                for e in explanations
            ],
            "prompts": {
                "explain": {
                    e.term: render_explain_prompt(e.term, e.evidence)
                    for e in explanations
                    if e.evidence
                },
                "simplify_prompt_id": version.prompt_id,
                "simplify": render_prompt(
                    version.prompt_id,
                    document=cleaned,
                    explanations=_render_explanations(explanations),
                ),
            },
        }
        audit_path = Path(audit_dir)
        audit_path.mkdir(parents=True, exist_ok=True)
        with open(audit_path / f"{rec.id}.audit.json", "w", encoding="utf-8") as f:
            json.dump(audit, f, ensure_ascii=False, indent=2)
            f.write("\n")
    return version


def build_round2_request(
    rec: CveRecord,
    v1: SimplificationVersion,
    comments: list[str],
    instructions_id: str = ROUND2_INSTRUCTIONS,
) -> list[dict]:
    """Resimplification request: the round-1 prompt template, improvement
    instructions, the original CVE, the round-1 simplification, and the
    reviewer comments, in that order."""
    if v1.round != 1:
        raise WrongRound(f"{v1.cve_id}: expected a round-1 version, got round {v1.round}")
    if comments:
        comments_block = "\n".join(f"- {c}" for c in comments)
    else:
        comments_block = "No reviewer comments."
    content = "\n\n".join(
        [
            "Original prompt:\n" + load_prompt(v1.prompt_id),
            "Instructions:\n" + load_prompt(instructions_id),
            "Original CVE description:\n" + rec.cleaned_description,
            "Initial simplification:\n" + v1.text,
            "Reviewer comments:\n" + comments_block,
        ]
    )
    return [{"role": "user", "content": content}]


def execute_round2(
    v1: SimplificationVersion,
    messages: list[dict],
    client: ChatClient,
) -> SimplificationVersion:
    """Run a prepared round-2 package. A refusal keeps the round-1 text (the
    best available simplification) rather than regressing to the raw
    original."""
    reply = chat(client, messages)
    flags = set()
    if reply.refusal:
        text = v1.text
        flags.add(FLAG_REFUSAL_FALLBACK)
    else:
        text = reply.text.strip()
    if text == v1.text:
        flags.add(FLAG_NO_CHANGE)
    return SimplificationVersion(
        cve_id=v1.cve_id,
        round=v1.round + 1,
        mode=MODE_DOCUMENT,
        model_id=client.model_id,
        prompt_id=ROUND2_INSTRUCTIONS,
        text=text,
        flags=frozenset(flags),
    )


def resimplify(
    rec: CveRecord,
    v1: SimplificationVersion,
    comments: list[str],
    client: ChatClient,
) -> SimplificationVersion:
    return execute_round2(v1, build_round2_request(rec, v1, comments), client)


def simplify_records(
    records: list[CveRecord],
    client: ChatClient,
    mode: str = MODE_SENTENCE,
    kb: TermKb | None = None,
    strategy: str = "lexicon",
    audit_dir: str | Path | None = None,
) -> list[SimplificationVersion]:
    """Simplify many records, up to client.max_parallel documents in flight.
    Results come back in record order."""

    def one(rec: CveRecord) -> SimplificationVersion:
        if mode == MODE_SENTENCE:
            return simplify_sentencewise(rec, client)
        if mode == MODE_DOCUMENT:
            return simplify_document(rec, client)
        if mode == MODE_AGENT:
            if kb is None:
                raise ValueError("agent mode requires a term knowledge base")
            return run_agent_pipeline(rec, kb, client, strategy=strategy, audit_dir=audit_dir)
        raise ValueError(f"unknown mode {mode!r}")

    if client.max_parallel > 1 and len(records) > 1:
        with ThreadPoolExecutor(max_workers=client.max_parallel) as pool:
            return list(pool.map(one, records))
    return [one(rec) for rec in records]


def version_to_json_line(v: SimplificationVersion) -> str:
    obj = {
        "cve_id": v.cve_id,
        "round": v.round,
        "mode": v.mode,
        "model": v.model_id,
        "prompt_id": v.prompt_id,
        "text": v.text,
    }
    if v.sentence_alignment is not None:
        obj["alignment"] = [[list(span), text] for span, text in v.sentence_alignment]
    obj["flags"] = sorted(v.flags)
    return json.dumps(obj, ensure_ascii=False)


def version_from_json_line(line: str) -> SimplificationVersion:
    obj = json.loads(line)
    alignment = None
    if obj.get("alignment") is not None:
        alignment = tuple(
            ((int(span[0]), int(span[1])), text) for span, text in obj["alignment"]
        )
    return SimplificationVersion(
        cve_id=obj["cve_id"],
        round=int(obj["round"]),
        mode=obj["mode"],
        model_id=obj["model"],
        prompt_id=obj["prompt_id"],
        text=obj["text"],
        sentence_alignment=alignment,
        flags=frozenset(obj.get("flags", [])),
    )


def save_versions(versions: list[SimplificationVersion], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for v in versions:
            f.write(version_to_json_line(v) + "\n")


def load_versions(path: str | Path) -> list[SimplificationVersion]:
    versions = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                versions.append(version_from_json_line(line))
    return versions
