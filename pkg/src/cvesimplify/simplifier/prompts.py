"""Versioned prompt templates shipped as editable data files.

A prompt_id is the template file's stem (e.g. "document_v1"); every stored
simplification records the prompt_id it was produced with, so outputs stay
traceable to the exact wording that generated them.
"""

from __future__ import annotations

from importlib import resources

SENTENCE_PROMPT = "sentence_v1"
DOCUMENT_PROMPT = "document_v1"
AGENT_PROMPT = "agent_v1"
ROUND2_INSTRUCTIONS = "round2_instructions_v1"


class UnknownPrompt(Exception):
    """No template file exists for the requested prompt_id."""


def _prompt_dir():
    return resources.files("cvesimplify") / "prompts"


def available_prompts() -> list[str]:
    names = []
    for entry in _prompt_dir().iterdir():
        if entry.name.endswith(".txt"):
            names.append(entry.name[: -len(".txt")])
    return sorted(names)


def load_prompt(prompt_id: str) -> str:
    path = _prompt_dir() / f"{prompt_id}.txt"
    try:
        text = path.read_text(encoding="utf-8")
    except (FileNotFoundError, OSError) as exc:
        raise UnknownPrompt(f"no prompt template named {prompt_id!r}") from exc
    return text.rstrip("\n")


def render_prompt(prompt_id: str, **fields: str) -> str:
    template = load_prompt(prompt_id)
    try:
        return template.format(**fields)
    except (KeyError, IndexError) as exc:
        raise ValueError(f"prompt {prompt_id!r} is missing a value for {exc}") from exc
