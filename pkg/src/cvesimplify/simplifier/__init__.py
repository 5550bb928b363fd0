from .client import (
    BadStatus,
    ChatClient,
    ChatReply,
    HashEmbeddingProvider,
    HttpEmbeddingProvider,
    MalformedResponse,
    TransportError,
    chat,
    chat_client_from_env,
)
from .fidelity import (
    KIND_ID_MISSING,
    KIND_VERSION_ALTERED,
    KIND_VERSION_MISSING,
    FidelityFinding,
    lint_fidelity,
)
from .pipeline import (
    FLAG_FIDELITY_VIOLATION,
    FLAG_NO_CHANGE,
    FLAG_REFUSAL_FALLBACK,
    MODE_AGENT,
    MODE_DOCUMENT,
    MODE_SENTENCE,
    EmptyDocument,
    SimplificationVersion,
    WrongRound,
    build_round2_request,
    execute_round2,
    load_versions,
    resimplify,
    run_agent_pipeline,
    save_versions,
    simplify_document,
    simplify_records,
    simplify_sentencewise,
    version_from_json_line,
    version_to_json_line,
)
from .prompts import (
    AGENT_PROMPT,
    DOCUMENT_PROMPT,
    ROUND2_INSTRUCTIONS,
    SENTENCE_PROMPT,
    UnknownPrompt,
    available_prompts,
    load_prompt,
    render_prompt,
)

__all__ = [
    "BadStatus",
    "ChatClient",
    "ChatReply",
    "HashEmbeddingProvider",
    "HttpEmbeddingProvider",
    "MalformedResponse",
    "TransportError",
    "chat",
    "chat_client_from_env",
    "KIND_ID_MISSING",
    "KIND_VERSION_ALTERED",
    "KIND_VERSION_MISSING",
    "FidelityFinding",
    "lint_fidelity",
    "FLAG_FIDELITY_VIOLATION",
    "FLAG_NO_CHANGE",
    "FLAG_REFUSAL_FALLBACK",
    "MODE_AGENT",
    "MODE_DOCUMENT",
    "MODE_SENTENCE",
    "EmptyDocument",
    "SimplificationVersion",
    "WrongRound",
    "build_round2_request",
    "execute_round2",
    "load_versions",
    "resimplify",
    "run_agent_pipeline",
    "save_versions",
    "simplify_document",
    "simplify_records",
    "simplify_sentencewise",
    "version_from_json_line",
    "version_to_json_line",
    "AGENT_PROMPT",
    "DOCUMENT_PROMPT",
    "ROUND2_INSTRUCTIONS",
    "SENTENCE_PROMPT",
    "UnknownPrompt",
    "available_prompts",
    "load_prompt",
    "render_prompt",
]
