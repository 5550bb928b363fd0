"""Meaning-preservation scores from token and document embeddings.

The embedding source is abstracted behind EmbeddingProvider so the same
scoring code runs against a remote embedding endpoint or a deterministic
offline provider. Scores here use plain greedy max-cosine matching: no IDF
weighting, no baseline rescaling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence, runtime_checkable

import numpy as np


class EmptySequence(Exception):
    """Both token sequences must be non-empty."""


class ProviderFailure(Exception):
    """An embedding provider could not produce vectors."""


@runtime_checkable
class EmbeddingProvider(Protocol):
    """Embedding contract: token mode returns one vector per token,
    document mode returns a single vector per text. Vectors are finite
    real arrays of the provider-declared dimension."""

    dimension: int

    def embed_tokens(self, tokens: Sequence[str]) -> list[list[float]]: ...

    def embed_text(self, text: str) -> list[float]: ...


@dataclass(frozen=True)
class BertScoreResult:
    precision: float
    recall: float
    f1: float


def _unit_rows(vectors: list[list[float]], what: str) -> np.ndarray:
    arr = np.asarray(vectors, dtype=float)
    if arr.ndim != 2:
        raise ProviderFailure(f"{what}: expected a matrix of vectors, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ProviderFailure(f"{what}: non-finite values in embeddings")
    norms = np.linalg.norm(arr, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return arr / norms


def bertscore(
    candidate_tokens: Sequence[str],
    reference_tokens: Sequence[str],
    provider: EmbeddingProvider,
) -> BertScoreResult:
    """Greedy token-matching score.

    Precision is the mean over candidate tokens of the best cosine against
    any reference token; recall is the mirror image; f1 the harmonic mean.
    """
    cand = list(candidate_tokens)
    ref = list(reference_tokens)
    if not cand or not ref:
        raise EmptySequence("bertscore requires non-empty candidate and reference tokens")

    try:
        cand_vecs = provider.embed_tokens(cand)
        ref_vecs = provider.embed_tokens(ref)
    except ProviderFailure:
        raise
    except Exception as exc:
        raise ProviderFailure(f"token embedding failed: {exc}") from exc
    if len(cand_vecs) != len(cand) or len(ref_vecs) != len(ref):
        raise ProviderFailure("provider returned a vector count different from the token count")

    c = _unit_rows(cand_vecs, "candidate")
    r = _unit_rows(ref_vecs, "reference")
    sim = c @ r.T
    precision = float(sim.max(axis=1).mean())
    recall = float(sim.max(axis=0).mean())
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return BertScoreResult(precision=precision, recall=recall, f1=f1)


def semantic_similarity(
    candidate_text: str, reference_text: str, provider: EmbeddingProvider
) -> float:
    """Cosine of the whole-text embeddings of candidate and reference."""
    try:
        x = np.asarray(provider.embed_text(candidate_text), dtype=float)
        y = np.asarray(provider.embed_text(reference_text), dtype=float)
    except ProviderFailure:
        raise
    except Exception as exc:
        raise ProviderFailure(f"document embedding failed: {exc}") from exc
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ProviderFailure("non-finite values in document embeddings")
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0 or ny == 0:
        raise ProviderFailure("zero-norm document embedding")
    return float(np.dot(x, y) / (nx * ny))
