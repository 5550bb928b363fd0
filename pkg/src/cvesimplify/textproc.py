"""Deterministic text primitives: sentence splitting, tokenization, syllables, n-grams.

Everything in this module is rule-based and dependency-free so that metric
scores are reproducible byte-for-byte across machines. CVE text is full of
version strings ("4.3.2"), identifiers ("CVE-2025-32202") and file names
("setup.exe"); the rules below are written to keep those intact.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

SENTENCE_PUNCT = ".!?"

# Token kinds
WORD = "word"
NUMBER = "number-like"
IDLIKE = "id-like"
PUNCT = "punct"

# Common abbreviations that end with a period mid-sentence. Compared
# case-insensitively against the token preceding a candidate boundary,
# with its trailing period removed.
ABBREVIATIONS = frozenset(
    {
        "e.g",
        "i.e",
        "etc",
        "vs",
        "cf",
        "al",
        "resp",
        "approx",
        "no",
        "fig",
        "ver",
        "vol",
        "rev",
        "inc",
        "ltd",
        "co",
        "corp",
        "dr",
        "mr",
        "mrs",
        "ms",
        "prof",
        "st",
    }
)

_NUMBER_RE = re.compile(r"\d+(?:[.,]\d+)*")
_DIGIT_GROUP_RE = re.compile(r"\d+")
_VOWELS = "aeiou"


@dataclass(frozen=True)
class SentenceSplit:
    """Sentence spans (start, end) into the source text.

    Spans are ordered, non-overlapping and cover all non-whitespace of the
    source; only whitespace separates consecutive spans.
    """

    text: str
    spans: list[tuple[int, int]]

    def sentences(self) -> list[str]:
        return [self.text[s:e] for s, e in self.spans]

    def __len__(self) -> int:
        return len(self.spans)


@dataclass(frozen=True)
class TokenSequence:
    """Tokens with kind tags. Word and id-like tokens are lowercased;
    number-like tokens keep their exact source characters."""

    tokens: list[str]
    kinds: list[str]

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def non_punct(self) -> list[str]:
        return [t for t, k in zip(self.tokens, self.kinds) if k != PUNCT]

    def of_kind(self, kind: str) -> list[str]:
        return [t for t, k in zip(self.tokens, self.kinds) if k == kind]


def _preceding_token_is_abbreviation(text: str, punct_pos: int) -> bool:
    i = punct_pos - 1
    while i >= 0 and not text[i].isspace():
        i -= 1
    token = text[i + 1 : punct_pos].rstrip(".")
    return token.lower() in ABBREVIATIONS


def split_sentences(text: str) -> SentenceSplit:
    """Split text into sentences on ``.!?`` followed by whitespace and an
    uppercase start.

    Dotted version strings, CVE identifiers and file names never contain a
    period followed by whitespace, so they survive untouched; a known
    abbreviation before the period suppresses the split even when an
    uppercase word follows.
    """
    n = len(text)
    spans: list[tuple[int, int]] = []
    i = 0
    while i < n and text[i].isspace():
        i += 1
    start = i
    while i < n:
        if text[i] in SENTENCE_PUNCT:
            j = i
            while j + 1 < n and text[j + 1] in SENTENCE_PUNCT:
                j += 1
            k = j + 1
            if k < n and text[k].isspace():
                m = k
                while m < n and text[m].isspace():
                    m += 1
                # The abbreviation guard concerns periods only; a sentence
                # can always end at ! or ?.
                suppressed = text[i] == "." and _preceding_token_is_abbreviation(text, i)
                if m < n and text[m].isupper() and not suppressed:
                    spans.append((start, j + 1))
                    start = m
                    i = m
                    continue
            i = j + 1
        else:
            i += 1
    if start < n:
        end = n
        while end > start and text[end - 1].isspace():
            end -= 1
        if end > start:
            spans.append((start, end))
    return SentenceSplit(text=text, spans=spans)


def _classify_core(core: str) -> str:
    if _NUMBER_RE.fullmatch(core):
        return NUMBER
    if any(c.isdigit() for c in core):
        return IDLIKE
    if "." in core[1:-1]:
        # internal dot without digits: file names, hostnames
        return IDLIKE
    return WORD


def tokenize(text: str) -> TokenSequence:
    """Whitespace tokenization with punctuation stripping.

    Leading and trailing punctuation runs become punct tokens. Tokens with
    internal digits/dots (versions, CVE ids, hostnames) are kept whole and
    tagged number-like or id-like; plain words are lowercased.
    """
    tokens: list[str] = []
    kinds: list[str] = []
    for chunk in text.split():
        a, b = 0, len(chunk)
        while a < b and not chunk[a].isalnum():
            a += 1
        while b > a and not chunk[b - 1].isalnum():
            b -= 1
        lead, core, trail = chunk[:a], chunk[a:b], chunk[b:]
        if lead:
            tokens.append(lead)
            kinds.append(PUNCT)
        if core:
            kind = _classify_core(core)
            tokens.append(core if kind == NUMBER else core.lower())
            kinds.append(kind)
        if trail:
            tokens.append(trail)
            kinds.append(PUNCT)
    return TokenSequence(tokens=tokens, kinds=kinds)


def count_syllables(token: str) -> int:
    """Heuristic syllable count, always >= 1 for non-empty tokens.

    Words: maximal vowel groups (y counts when not word-initial) minus a
    silent final "e" after a consonant, unless the word ends in
    consonant+"le". Tokens containing digits count one syllable per digit
    group ("4.3.2" -> 3), since digit strings have no orthographic
    syllables.
    """
    if not token:
        return 0
    if any(c.isdigit() for c in token):
        return max(1, len(_DIGIT_GROUP_RE.findall(token)))
    w = token.lower()
    groups = 0
    prev_vowel = False
    for i, ch in enumerate(w):
        is_vowel = ch in _VOWELS or (ch == "y" and i > 0)
        if is_vowel and not prev_vowel:
            groups += 1
        prev_vowel = is_vowel
    if len(w) >= 2 and w.endswith("e"):
        before = w[-2]
        consonant = before.isalpha() and before not in _VOWELS and before != "y"
        ends_cons_le = len(w) >= 3 and w.endswith("le") and w[-3].isalpha() and w[-3] not in _VOWELS
        if consonant and not ends_cons_le:
            groups -= 1
    return max(1, groups)


def ngrams(tokens: TokenSequence | list[str], n: int) -> Counter:
    """Contiguous n-grams over non-punct tokens, with multiplicities."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(tokens, TokenSequence):
        items = tokens.non_punct()
    else:
        items = list(tokens)
    return Counter(tuple(items[i : i + n]) for i in range(len(items) - n + 1))
