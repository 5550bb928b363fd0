import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mockserver import MockServer  # noqa: E402

from cvesimplify.corpus import CveRecord, SPLIT_EVAL, SPLIT_UNASSIGNED  # noqa: E402
from cvesimplify.simplifier import ChatClient  # noqa: E402


@pytest.fixture
def server():
    srv = MockServer().start()
    yield srv
    srv.stop()


def make_client(base_url: str, **overrides) -> ChatClient:
    defaults = dict(
        base_url=base_url,
        model_id="mock-model",
        temperature=0.0,
        request_timeout=5.0,
        backoff_start=0.01,
    )
    defaults.update(overrides)
    return ChatClient(**defaults)


def make_record(
    cve_id: str = "CVE-2025-0001",
    text: str = "A buffer overflow in Foo 1.2.3 allows remote attackers to crash the service.",
    split: str = SPLIT_UNASSIGNED,
) -> CveRecord:
    return CveRecord(
        id=cve_id,
        raw_description=text,
        cleaned_description=text,
        removed_spans=[],
        split=split,
        source_path="",
    )


def eval_record(cve_id: str, text: str) -> CveRecord:
    return make_record(cve_id, text, split=SPLIT_EVAL)


def cve_json(cve_id: str, description: str, lang: str = "en") -> str:
    return json.dumps(
        {
            "cveMetadata": {"cveId": cve_id},
            "containers": {
                "cna": {"descriptions": [{"lang": lang, "value": description}]}
            },
        }
    )


def write_lexicon(path: Path, entries: list[dict]) -> Path:
    with open(path, "w", encoding="utf-8") as f:
        for entry in entries:
            f.write(json.dumps(entry) + "\n")
    return path


SAMPLE_LEXICON = [
    {
        "term": "buffer overflow",
        "aliases": ["buffer overrun"],
        "definition": "A bug where a program writes more data than a memory area can hold.",
        "source": "glossary",
        "label": "TECHNIQUE",
    },
    {
        "term": "remote code execution",
        "aliases": ["RCE"],
        "definition": "An attacker runs their own commands on the affected machine over the network.",
        "source": "glossary",
        "label": "TECHNIQUE",
    },
    {
        "term": "cross-site scripting",
        "aliases": ["XSS"],
        "definition": "Injecting malicious scripts into web pages viewed by other users.",
        "source": "glossary",
        "label": "TECHNIQUE",
    },
    {
        "term": "denial of service",
        "aliases": ["DoS"],
        "definition": "Making a system unavailable to its intended users.",
        "source": "glossary",
        "label": "TACTIC",
    },
    {
        "term": "SQL injection",
        "aliases": [],
        "definition": "Smuggling database commands through unsanitized application inputs.",
        "source": "glossary",
        "label": "TECHNIQUE",
    },
]
