"""Acceptance gate: every release criterion, one pass/fail line per criterion.

Run with -v to see one line per criterion; each test also prints a PASS line
visible under -s or in failure output.
"""

import random
import time

import pytest
from conftest import SAMPLE_LEXICON, make_client, make_record, write_lexicon
from mockserver import chat_payload
from sari_oracle import oracle_sari
from test_cli import build_input_dir, run_pipeline, scripted_chat, write_references
from test_meaning import OneHotProvider

from cvesimplify.metrics import bertscore, dsari, readability, sari_components, semantic_similarity
from cvesimplify.review import (
    ANSWER_AGREE,
    ANSWER_DISAGREE,
    ANSWER_NEUTRAL,
    ROUND1_STATEMENTS,
    ROUND2_STATEMENTS,
    ReviewStore,
    Task,
    decide,
)
from cvesimplify.simplifier import (
    FLAG_REFUSAL_FALLBACK,
    SimplificationVersion,
    build_round2_request,
    lint_fidelity,
    simplify_sentencewise,
)
from cvesimplify.simplifier.prompts import DOCUMENT_PROMPT, load_prompt


def passed(line: str) -> None:
    print(f"PASS: {line}")


WORDS = ["alert", "binary", "crash", "daemon", "exploit", "fuzz", "guard", "host"]


def random_sentences(rng: random.Random) -> str:
    sentences = []
    for _ in range(rng.randint(1, 4)):
        body = " ".join(rng.choice(WORDS) for _ in range(rng.randint(1, 8)))
        sentences.append(body.capitalize() + ".")
    return " ".join(sentences)


def test_dsari_identity_on_random_documents():
    rng = random.Random(1)
    start = time.perf_counter()
    for _ in range(50):
        doc = random_sentences(rng)
        result = dsari(doc, doc, doc)
        assert result.d_sari == pytest.approx(1.0, abs=1e-9)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    passed(f"D-SARI identity = 1 within 1e-9 on 50 random documents ({elapsed:.3f}s)")


def test_sari_matches_independent_oracle():
    rng = random.Random(2)
    alphabet = ["a", "b", "c", "d", "e"]
    start = time.perf_counter()
    for _ in range(200):
        triple = [
            [rng.choice(alphabet) for _ in range(rng.randint(0, 12))] for _ in range(3)
        ]
        ours = sari_components(*triple)
        expected = oracle_sari(*triple)
        assert (ours.f_keep, ours.f_add, ours.p_del) == expected
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    passed(f"SARI components equal the naive oracle on 200 random triples ({elapsed:.3f}s)")


def test_dsari_hand_case():
    result = dsari("a b c d", "a b c", "a b", max_n=1)
    assert result.d_sari == pytest.approx(0.5661, abs=0.0005)
    passed("D-SARI hand case `a b c d`/`a b c`/`a b` (max_n=1) = 0.5661 +/- 0.0005")


def test_fkgl_hand_case():
    stats = readability("The cat sat on the mat. It was happy.")
    assert stats.fkgl == pytest.approx(-0.7239, abs=1e-3)
    assert stats.asl == pytest.approx(4.5)
    assert stats.asw == pytest.approx(10 / 9)
    passed("FKGL hand case = -0.7239 +/- 1e-3 with asl 4.5 and asw 10/9")


def test_bertscore_identity_permutation_orthogonal():
    provider = OneHotProvider(["alpha", "beta", "gamma", "delta", "epsilon", "zeta"])
    tokens = ["alpha", "beta", "gamma"]
    assert bertscore(tokens, tokens, provider).f1 == pytest.approx(1.0, abs=1e-9)
    assert bertscore(["gamma", "alpha", "beta"], tokens, provider).f1 == pytest.approx(
        1.0, abs=1e-9
    )
    disjoint = bertscore(["delta", "epsilon"], tokens, provider)
    assert disjoint.f1 == pytest.approx(0.0, abs=1e-9)
    passed("BERTScore identity/permutation F1 = 1 and disjoint-vocabulary F1 = 0 within 1e-9")


def test_semantic_similarity_properties():
    vocabulary = [f"w{i}" for i in range(12)]
    provider = OneHotProvider(vocabulary)
    rng = random.Random(3)
    for _ in range(100):
        a = " ".join(rng.choice(vocabulary) for _ in range(rng.randint(1, 8)))
        b = " ".join(rng.choice(vocabulary) for _ in range(rng.randint(1, 8)))
        ab = semantic_similarity(a, b, provider)
        ba = semantic_similarity(b, a, provider)
        assert ab == pytest.approx(ba, abs=1e-12)
        assert -1.0 - 1e-9 <= ab <= 1.0 + 1e-9
        assert semantic_similarity(a, a, provider) == pytest.approx(1.0, abs=1e-9)
    passed("semantic similarity symmetric, within [-1, 1], and identity = 1 over 100 pairs")


def test_acceptance_rule_against_brute_force():
    rng = random.Random(4)
    ids = [s.id for s in ROUND1_STATEMENTS]
    answers = (ANSWER_AGREE, ANSWER_NEUTRAL, ANSWER_DISAGREE)
    for _ in range(1000):
        maps = [
            {sid: rng.choice(answers) for sid in ids} for _ in range(rng.randint(0, 12))
        ]
        decision = decide("doc", 1, ROUND1_STATEMENTS, maps)
        if not maps:
            expected = False
        else:
            expected = all(
                sum(1 for m in maps if m[sid] == ANSWER_AGREE) / len(maps) > 0.8
                and all(m[sid] != ANSWER_DISAGREE for m in maps)
                for sid in ids
            )
        assert decision.accepted == expected

    # Exactly 80% agreement (4 of 5) stays below the strict threshold.
    maps = [{sid: ANSWER_AGREE for sid in ids} for _ in range(4)]
    maps.append({sid: ANSWER_NEUTRAL for sid in ids})
    assert decide("doc", 1, ROUND1_STATEMENTS, maps).accepted is False
    passed("acceptance rule matches brute force on 1000 response sets; 80% exactly is rejected")


def test_round_flow_forty_docs_five_accepted(tmp_path):
    ids = [f"CVE-2025-{2000 + i}" for i in range(40)]
    store = ReviewStore(tmp_path / "flow.jsonl")
    store.create_round(
        1, [Task(c, original=f"Original {c}.", versions={"v1": "Simple."}) for c in ids]
    )
    accepted_ids = set(ids[:5])
    for cve_id in ids:
        for reviewer in ("r1", "r2", "r3"):
            if cve_id in accepted_ids:
                answers = {s.id: ANSWER_AGREE for s in ROUND1_STATEMENTS}
            else:
                answers = {"easier": ANSWER_DISAGREE, "meaning": ANSWER_AGREE}
            store.submit_response(1, reviewer, cve_id, answers)
    decisions = store.close_round(1)
    assert {d.cve_id for d in decisions if d.accepted} == accepted_ids

    carry = [c for c in ids if c not in accepted_ids]
    state = store.create_round(
        2,
        [Task(c, original="orig", versions={"v1": "one", "v2": "two"}) for c in carry],
    )
    assert len(state.task_order) == 35
    assert state.statements == ROUND2_STATEMENTS
    passed("40-doc round with 5 accepted leaves exactly 35 round-2 tasks")


def test_fidelity_linter_criteria():
    findings = lint_fidelity(
        "Affected through version 4.3000000025 of the parser.",
        "Versions up to 4.3 of the parser are affected.",
    )
    assert len(findings) == 1
    assert findings[0].kind == "version_altered"
    assert findings[0].original_token == "4.3000000025"
    assert findings[0].found_token == "4.3"

    rng = random.Random(5)
    for _ in range(100):
        parts = []
        for _ in range(rng.randint(2, 10)):
            roll = rng.random()
            if roll < 0.25:
                parts.append(".".join(str(rng.randint(0, 50)) for _ in range(rng.randint(1, 3))))
            elif roll < 0.35:
                parts.append(f"CVE-{rng.randint(2015, 2026)}-{rng.randint(1000, 99999)}")
            else:
                parts.append(rng.choice(WORDS))
        text = " ".join(parts) + "."
        assert lint_fidelity(text, text) == []
    passed("fidelity linter: truncated-version case yields one finding; lint(x,x) empty x100")


def test_refusal_fallback_keeps_sentence(server):
    calls = {"n": 0}

    def handler(body):
        calls["n"] += 1
        if calls["n"] == 2:
            return 200, chat_payload("I'm sorry, I can't help with that.")
        return 200, chat_payload(f"Rewritten {calls['n']}.")

    server.handlers["/v1/chat/completions"] = handler
    text = "First sentence here. Second sentence stays. Third sentence here."
    version = simplify_sentencewise(make_record(text=text), make_client(server.base_url))
    assert FLAG_REFUSAL_FALLBACK in version.flags
    assert len(version.sentence_alignment) == 3
    (start, end), output = version.sentence_alignment[1]
    assert output == text[start:end] == "Second sentence stays."
    assert version.sentence_alignment[0][1] == "Rewritten 1."
    passed("refusal on sentence 2 keeps it byte-identical, flagged, with total alignment")


def test_round2_package_order():
    rec = make_record(text="The raw CVE description text.")
    v1 = SimplificationVersion(
        cve_id=rec.id,
        round=1,
        mode="document",
        model_id="m",
        prompt_id=DOCUMENT_PROMPT,
        text="The round-1 simplification.",
        flags=frozenset(),
    )
    messages = build_round2_request(rec, v1, ["Shorter please.", "Keep 1.2.3."])
    content = messages[0]["content"]
    parts = [
        ("Original prompt:", load_prompt(DOCUMENT_PROMPT)),
        ("Instructions:", "Revise the earlier simplification"),
        ("Original CVE description:", "The raw CVE description text."),
        ("Initial simplification:", "The round-1 simplification."),
        ("Reviewer comments:", "- Shorter please.\n- Keep 1.2.3."),
    ]
    last = -1
    for heading, body in parts:
        position = content.index(heading)
        assert position > last, f"{heading} out of order"
        assert body in content
        last = position
    passed("round-2 package has prompt, instructions, CVE, simplification, comments in order")


def test_end_to_end_under_60s_and_reproducible(server, monkeypatch, tmp_path):
    scripted_chat(server)

    def ner_handler(body):
        text = body.get("text", "")
        mentions = []
        idx = text.find("remote")
        if idx >= 0:
            mentions.append(
                {"start": idx, "end": idx + len("remote attackers"), "label": "TACTIC",
                 "surface": text[idx : idx + len("remote attackers")]}
            )
        return 200, mentions

    server.handlers["/ner"] = ner_handler
    monkeypatch.setenv("ATS_LLM_BASE_URL", server.base_url)
    monkeypatch.setenv("ATS_LLM_MODEL", "mock-model")
    monkeypatch.setenv("ATS_NER_BASE_URL", server.base_url + "/ner")

    src = build_input_dir(tmp_path)
    lexicon = write_lexicon(tmp_path / "lexicon.jsonl", SAMPLE_LEXICON)
    refs = write_references(tmp_path / "refs.jsonl", [f"CVE-2025-{1000 + i}" for i in range(100)])
    work = tmp_path / "run"
    work.mkdir()

    start = time.perf_counter()
    artifacts = run_pipeline(work, src, lexicon, refs, strategy="union")
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    assert any(path == "/ner" for path, _ in server.requests)

    csv_text = (work / "report" / "system.csv").read_text(encoding="utf-8")
    assert csv_text.startswith("system,")
    tables = (work / "report" / "tables.md").read_text(encoding="utf-8")
    for group in ("## Reference-based scores", "## Meaning preservation", "## Simplicity"):
        assert group in tables

    snapshot = {p: p.read_bytes() for p in artifacts}
    run_pipeline(work, src, lexicon, refs, strategy="union")
    for path, first_bytes in snapshot.items():
        assert path.read_bytes() == first_bytes, f"{path} changed across reruns"
    passed(f"end-to-end pipeline ran in {elapsed:.1f}s with byte-identical rerun")
