"""Linter for version numbers and identifiers that simplification must not
touch. Every number-like and id-like token of the original text has to
appear verbatim in the simplified text; a number that survives only as a
truncated prefix (4.3000000025 shortened to 4.3) is a distinct, more
specific finding than one that vanished outright.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..textproc import IDLIKE, NUMBER, tokenize

KIND_VERSION_ALTERED = "version_altered"
KIND_VERSION_MISSING = "version_missing"
KIND_ID_MISSING = "id_missing"


@dataclass(frozen=True)
class FidelityFinding:
    kind: str
    original_token: str
    found_token: str | None = None


def lint_fidelity(original_text: str, simplified_text: str) -> list[FidelityFinding]:
    original = tokenize(original_text)
    simplified = tokenize(simplified_text)
    present = set(simplified.tokens)
    simplified_numbers = [
        tok for tok, kind in zip(simplified.tokens, simplified.kinds) if kind == NUMBER
    ]

    findings = []
    seen: set[str] = set()
    for token, kind in zip(original.tokens, original.kinds):
        if kind not in (NUMBER, IDLIKE):
            continue
        if token in seen:
            continue
        seen.add(token)
        if token in present:
            continue
        if kind == IDLIKE:
            findings.append(FidelityFinding(KIND_ID_MISSING, token))
            continue
        # Longest truncated prefix is the most informative evidence.
        prefixes = [
            s
            for s in simplified_numbers
            if s != token and token.startswith(s) and s[-1].isdigit()
        ]
        if prefixes:
            findings.append(
                FidelityFinding(KIND_VERSION_ALTERED, token, max(prefixes, key=len))
            )
        else:
            findings.append(FidelityFinding(KIND_VERSION_MISSING, token))
    return findings
