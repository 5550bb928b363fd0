"""Grade-level readability from sentence length and syllable density."""

from __future__ import annotations

from dataclasses import dataclass

from .. import textproc


class NoWords(Exception):
    """Readability needs at least one word."""


@dataclass(frozen=True)
class ReadabilityStats:
    fkgl: float
    asl: float  # average sentence length in words
    asw: float  # average syllables per word
    word_count: int
    sentence_count: int
    syllable_count: int


def readability(doc_text: str) -> ReadabilityStats:
    """Compute the grade-level score 0.39*ASL + 11.8*ASW - 15.59 along with
    its components, which are worth reporting separately.

    Words are the non-punct tokens; syllables come from the heuristic
    counter in textproc, so scores are reproducible but not guaranteed to
    match other readability tools digit for digit.
    """
    tokens = textproc.tokenize(doc_text)
    words = tokens.non_punct()
    if not words:
        raise NoWords("document has no word tokens")
    sentence_count = max(1, len(textproc.split_sentences(doc_text)))
    syllable_count = sum(textproc.count_syllables(w) for w in words)
    asl = len(words) / sentence_count
    asw = syllable_count / len(words)
    return ReadabilityStats(
        fkgl=0.39 * asl + 11.8 * asw - 15.59,
        asl=asl,
        asw=asw,
        word_count=len(words),
        sentence_count=sentence_count,
        syllable_count=syllable_count,
    )
