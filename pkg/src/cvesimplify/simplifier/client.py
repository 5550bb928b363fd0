"""HTTP clients for chat models and embedding endpoints.

Both speak the widely deployed OpenAI-compatible wire format, so the same
code fronts hosted APIs and local model servers. A deterministic offline
embedding provider is included for tests and air-gapped evaluation runs.
"""

from __future__ import annotations

import hashlib
import os
import time
from dataclasses import dataclass, field

import httpx
import numpy as np

DEFAULT_REFUSAL_PATTERNS = ("I can't", "I cannot", "I'm sorry")
MAX_ATTEMPTS = 3

ENV_LLM_BASE_URL = "ATS_LLM_BASE_URL"
ENV_LLM_MODEL = "ATS_LLM_MODEL"
ENV_LLM_API_KEY = "ATS_LLM_API_KEY"
ENV_EMBED_BASE_URL = "ATS_EMBED_BASE_URL"
ENV_EMBED_MODEL = "ATS_EMBED_MODEL"
ENV_EMBED_API_KEY = "ATS_EMBED_API_KEY"


class TransportError(Exception):
    """Network failure or server error that persisted through retries."""


class BadStatus(Exception):
    """Non-retryable HTTP status (4xx)."""


class MalformedResponse(Exception):
    """Reply did not contain the expected fields."""


@dataclass(frozen=True)
class ChatClient:
    base_url: str
    model_id: str
    temperature: float = 0.0
    request_timeout: float = 60.0
    max_parallel: int = 1
    api_key: str = ""
    refusal_patterns: tuple[str, ...] = DEFAULT_REFUSAL_PATTERNS
    # Tests shrink this so retry paths run fast.
    backoff_start: float = 1.0

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_parallel < 1:
            raise ValueError("max_parallel must be >= 1")


@dataclass(frozen=True)
class ChatReply:
    text: str
    refusal: bool


def chat_client_from_env(**overrides) -> ChatClient:
    base_url = overrides.pop("base_url", None) or os.environ.get(ENV_LLM_BASE_URL)
    model_id = overrides.pop("model_id", None) or os.environ.get(ENV_LLM_MODEL)
    if not base_url or not model_id:
        raise ValueError(
            f"chat endpoint not configured: set {ENV_LLM_BASE_URL} and {ENV_LLM_MODEL}"
        )
    api_key = overrides.pop("api_key", None) or os.environ.get(ENV_LLM_API_KEY, "")
    return ChatClient(base_url=base_url, model_id=model_id, api_key=api_key, **overrides)


def _is_refusal(content: str, patterns: tuple[str, ...]) -> bool:
    stripped = content.strip()
    if not stripped:
        return True
    lowered = stripped.casefold()
    return any(lowered.startswith(p.casefold()) for p in patterns if p)


def chat(client: ChatClient, messages: list[dict]) -> ChatReply:
    """One chat completion. 5xx and network faults retry with exponential
    backoff (3 attempts total); 4xx raises immediately."""
    if not messages:
        raise ValueError("messages must be non-empty")
    if messages[-1].get("role") != "user":
        raise ValueError("messages must end with a user turn")
    url = client.base_url.rstrip("/") + "/v1/chat/completions"
    body = {
        "model": client.model_id,
        "messages": messages,
        "temperature": client.temperature,
    }
    headers = {}
    if client.api_key:
        headers["Authorization"] = f"Bearer {client.api_key}"

    last_error: Exception | None = None
    for attempt in range(MAX_ATTEMPTS):
        if attempt:
            time.sleep(client.backoff_start * 2 ** (attempt - 1))
        try:
            response = httpx.post(url, json=body, headers=headers, timeout=client.request_timeout)
        except httpx.HTTPError as exc:
            last_error = exc
            continue
        if 400 <= response.status_code < 500:
            raise BadStatus(f"chat endpoint returned {response.status_code}: {response.text[:200]}")
        if response.status_code >= 500:
            last_error = RuntimeError(f"HTTP {response.status_code}")
            continue
        try:
            content = response.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise MalformedResponse(f"unexpected chat reply shape: {exc}") from exc
        if not isinstance(content, str):
            raise MalformedResponse("chat reply content is not text")
        return ChatReply(text=content, refusal=_is_refusal(content, client.refusal_patterns))
    raise TransportError(f"chat endpoint failed after {MAX_ATTEMPTS} attempts: {last_error}")


class _ChatCallable:
    """Adapter giving term-explanation code a minimal .chat(messages) -> text
    view of a ChatClient; raises on refusal so callers record it as an error."""

    def __init__(self, client: ChatClient):
        self.client = client

    def chat(self, messages: list[dict]) -> str:
        reply = chat(self.client, messages)
        if reply.refusal:
            raise MalformedResponse("model refused to answer")
        return reply.text


class HttpEmbeddingProvider:
    """Embedding endpoint client; implements the EmbeddingProvider protocol."""

    def __init__(
        self,
        base_url: str,
        model_id: str,
        dimension: int,
        api_key: str = "",
        request_timeout: float = 60.0,
    ):
        self.base_url = base_url.rstrip("/")
        self.model_id = model_id
        self.dimension = dimension
        self.api_key = api_key
        self.request_timeout = request_timeout

    @classmethod
    def from_env(cls, dimension: int = 0) -> "HttpEmbeddingProvider":
        base_url = os.environ.get(ENV_EMBED_BASE_URL)
        model_id = os.environ.get(ENV_EMBED_MODEL)
        if not base_url or not model_id:
            raise ValueError(
                f"embedding endpoint not configured: set {ENV_EMBED_BASE_URL} and {ENV_EMBED_MODEL}"
            )
        return cls(base_url, model_id, dimension, api_key=os.environ.get(ENV_EMBED_API_KEY, ""))

    def _request(self, inputs: list[str]) -> list[list[float]]:
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            response = httpx.post(
                self.base_url + "/v1/embeddings",
                json={"model": self.model_id, "input": inputs},
                headers=headers,
                timeout=self.request_timeout,
            )
        except httpx.HTTPError as exc:
            raise TransportError(f"embedding endpoint unreachable: {exc}") from exc
        if response.status_code != 200:
            raise BadStatus(f"embedding endpoint returned {response.status_code}")
        try:
            data = response.json()["data"]
            vectors = [item["embedding"] for item in data]
        except (ValueError, KeyError, TypeError) as exc:
            raise MalformedResponse(f"unexpected embedding reply shape: {exc}") from exc
        if len(vectors) != len(inputs):
            raise MalformedResponse("embedding count does not match input count")
        if vectors and not self.dimension:
            self.dimension = len(vectors[0])
        return vectors

    def embed_tokens(self, tokens: list[str]) -> list[list[float]]:
        return self._request(list(tokens))

    def embed_text(self, text: str) -> list[float]:
        return self._request([text])[0]


class HashEmbeddingProvider:
    """Deterministic offline provider: each token hashes to a seed that
    expands to a unit-norm Gaussian vector, so identical tokens always map
    to identical vectors and no network access is needed."""

    def __init__(self, dimension: int = 16, seed: int = 0):
        self.dimension = dimension
        self.seed = seed
        self._cache: dict[str, list[float]] = {}

    def _vector(self, token: str) -> list[float]:
        cached = self._cache.get(token)
        if cached is not None:
            return cached
        digest = hashlib.sha256(f"{self.seed}:{token}".encode("utf-8")).digest()
        rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
        vec = rng.standard_normal(self.dimension)
        vec /= np.linalg.norm(vec)
        out = vec.tolist()
        self._cache[token] = out
        return out

    def embed_tokens(self, tokens: list[str]) -> list[list[float]]:
        return [self._vector(t) for t in tokens]

    def embed_text(self, text: str) -> list[float]:
        from ..textproc import tokenize

        tokens = tokenize(text).non_punct()
        if not tokens:
            return [0.0] * self.dimension
        mean = np.asarray([self._vector(t) for t in tokens]).mean(axis=0)
        return mean.tolist()
