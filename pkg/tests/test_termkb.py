"""Term extraction, lexicon retrieval, and grounded explanation."""

import time

import pytest
from conftest import SAMPLE_LEXICON, make_client, write_lexicon
from hypothesis import given
from hypothesis import strategies as st

from cvesimplify.simplifier.client import _ChatCallable
from cvesimplify.termkb import (
    ALLOWED_LABELS,
    DuplicateTerm,
    LexiconEntry,
    LexiconMatcher,
    LlmUnavailable,
    NerClient,
    NerUnavailable,
    TermKb,
    explain_terms,
    extract_terms,
    index_lexicon,
    load_lexicon,
    retrieve,
)


def entry(term, definition="A definition.", aliases=(), label=None, source="src"):
    return LexiconEntry(
        term=term, aliases=list(aliases), definition=definition, source=source, label=label
    )


# ---------------------------------------------------------------- lexicon file


class TestLoadLexicon:
    def test_loads_entries(self, tmp_path):
        path = write_lexicon(tmp_path / "lex.jsonl", SAMPLE_LEXICON)
        entries = load_lexicon(path)
        assert len(entries) == len(SAMPLE_LEXICON)
        assert entries[0].term == "buffer overflow"
        assert entries[0].aliases == ["buffer overrun"]
        assert entries[0].label == "TECHNIQUE"

    def test_label_optional(self, tmp_path):
        path = write_lexicon(
            tmp_path / "lex.jsonl",
            [{"term": "worm", "definition": "Self-replicating malware.", "source": "s"}],
        )
        entries = load_lexicon(path)
        assert entries[0].label is None
        assert entries[0].aliases == []

    def test_unknown_label_rejected(self, tmp_path):
        path = write_lexicon(
            tmp_path / "lex.jsonl",
            [{"term": "monday", "definition": "A day.", "label": "DATE"}],
        )
        with pytest.raises(ValueError):
            load_lexicon(path)

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "lex.jsonl"
        path.write_text(
            '{"term": "rootkit", "definition": "Stealthy malware."}\n\n', encoding="utf-8"
        )
        assert len(load_lexicon(path)) == 1


# ---------------------------------------------------------------- lexicon matcher


class TestLexiconMatcher:
    def test_two_mentions_sorted_by_position(self):
        matcher = LexiconMatcher(
            [entry("SQL injection", label="TECHNIQUE"), entry("malware", label="CON")]
        )
        mentions = matcher.find("The malware uses SQL injection.")
        assert [m.surface for m in mentions] == ["malware", "SQL injection"]
        assert [m.label for m in mentions] == ["CON", "TECHNIQUE"]
        assert all(m.source == "lexicon" for m in mentions)
        assert mentions[0].span == (4, 11)

    def test_word_boundary_blocks_substring(self):
        matcher = LexiconMatcher([entry("malware")])
        assert matcher.find("Installs antimalware tooling.") == []
        assert len(matcher.find("Installs malware quietly.")) == 1

    def test_case_insensitive(self):
        matcher = LexiconMatcher([entry("buffer overflow")])
        mentions = matcher.find("A BUFFER OVERFLOW was found.")
        assert len(mentions) == 1
        assert mentions[0].surface == "BUFFER OVERFLOW"

    def test_leftmost_longest(self):
        # "remote code execution" should win over the shorter "code execution".
        matcher = LexiconMatcher([entry("code execution"), entry("remote code execution")])
        mentions = matcher.find("Allows remote code execution on the host.")
        assert [m.surface for m in mentions] == ["remote code execution"]

    def test_alias_matches_canonical_entry(self):
        e = entry("remote code execution", aliases=["RCE"])
        matcher = LexiconMatcher([e])
        mentions = matcher.find("Leads to RCE.")
        assert len(mentions) == 1
        assert mentions[0].surface == "RCE"
        assert mentions[0].span == (9, 12)

    def test_empty_document(self):
        matcher = LexiconMatcher([entry("malware")])
        assert matcher.find("") == []

    def test_default_label_applied(self):
        matcher = LexiconMatcher([entry("worm", label=None)])
        mentions = matcher.find("A worm spreads.")
        assert mentions[0].label in ALLOWED_LABELS

    def test_no_overlaps_and_sorted(self):
        matcher = LexiconMatcher(
            [entry("denial of service"), entry("service"), entry("denial")]
        )
        mentions = matcher.find("denial of service denial service")
        spans = [m.span for m in mentions]
        assert spans == sorted(spans)
        for (s1, e1), (s2, e2) in zip(spans, spans[1:]):
            assert e1 <= s2
        assert mentions[0].surface == "denial of service"

    @given(st.text(alphabet="abc xyz", max_size=60))
    def test_spans_slice_back_to_surface(self, text):
        matcher = LexiconMatcher([entry("abc"), entry("abc xyz"), entry("xyz")])
        for m in matcher.find(text):
            assert text[m.span[0] : m.span[1]] == m.surface


# ---------------------------------------------------------------- ner client


class TestNerClient:
    def test_label_filter_drops_disallowed(self, server):
        server.ner(
            lambda text: [
                {"start": 0, "end": 3, "label": "MALWARE", "surface": text[0:3]},
                {"start": 4, "end": 8, "label": "DATE", "surface": text[4:8]},
            ]
        )
        client = NerClient(server.base_url + "/ner")
        mentions = client.extract("Bad 2024 stuff")
        assert len(mentions) == 1
        assert mentions[0].label == "MALWARE"
        assert mentions[0].source == "ner"

    def test_posts_text_payload(self, server):
        server.ner(lambda text: [])
        NerClient(server.base_url + "/ner").extract("hello world")
        path, body = server.requests[-1]
        assert path == "/ner"
        assert body == {"text": "hello world"}

    def test_unreachable_endpoint(self):
        client = NerClient("http://127.0.0.1:9", timeout=0.5)
        with pytest.raises(NerUnavailable):
            client.extract("anything")

    def test_non_json_response(self, server):
        server.handlers["/ner"] = lambda body: (200, "not json at all")
        client = NerClient(server.base_url + "/ner")
        with pytest.raises(NerUnavailable):
            client.extract("anything")

    def test_server_error(self, server):
        server.handlers["/ner"] = lambda body: (500, {"detail": "boom"})
        client = NerClient(server.base_url + "/ner")
        with pytest.raises(NerUnavailable):
            client.extract("anything")


# ---------------------------------------------------------------- strategies


class TestExtractTerms:
    def test_lexicon_strategy(self):
        matcher = LexiconMatcher([entry("malware")])
        mentions = extract_terms("The malware runs.", strategy="lexicon", matcher=matcher)
        assert [m.surface for m in mentions] == ["malware"]

    def test_ner_strategy_requires_client(self):
        matcher = LexiconMatcher([entry("malware")])
        with pytest.raises(ValueError):
            extract_terms("x", strategy="ner", matcher=matcher, ner=None)

    def test_union_lexicon_wins_conflicts(self, server):
        text = "The malware uses phishing."
        # NER overlaps the lexicon mention and adds one new span.
        server.ner(
            lambda _: [
                {"start": 4, "end": 11, "label": "TOOL", "surface": "malware"},
                {"start": 17, "end": 25, "label": "TACTIC", "surface": "phishing"},
            ]
        )
        matcher = LexiconMatcher([entry("malware", label="CON")])
        mentions = extract_terms(
            text, strategy="union", matcher=matcher, ner=NerClient(server.base_url + "/ner")
        )
        assert [(m.surface, m.source) for m in mentions] == [
            ("malware", "lexicon"),
            ("phishing", "ner"),
        ]
        assert mentions[0].label == "CON"

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            extract_terms("x", strategy="magic", matcher=LexiconMatcher([]))

    def test_termkb_bundle(self):
        kb = TermKb([LexiconEntry(**{**e, "label": e.get("label")}) for e in SAMPLE_LEXICON])
        mentions = kb.extract("A buffer overflow enables RCE.")
        assert [m.surface for m in mentions] == ["buffer overflow", "RCE"]


# ---------------------------------------------------------------- bm25 index


class TestIndexAndRetrieve:
    def test_index_counts_entries(self):
        index = index_lexicon([entry("a"), entry("b"), entry("c")])
        assert len(index) == 3

    def test_duplicate_canonical_term(self):
        with pytest.raises(DuplicateTerm):
            index_lexicon([entry("Phishing"), entry("phishing")])

    def test_exact_term_match_ranks_first(self):
        phishing = entry("phishing", definition="Tricking a person into revealing secrets.")
        other = entry(
            "spear phishing campaign",
            definition="A targeted phishing phishing phishing operation.",
        )
        index = index_lexicon([other, phishing])
        results = retrieve(index, "phishing")
        assert results[0] is phishing

    def test_alias_match_ranks_first(self):
        rce = entry("remote code execution", aliases=["RCE"], definition="Run code remotely.")
        noise = entry("rce scanner", definition="Scans for rce rce rce issues.")
        index = index_lexicon([noise, rce])
        assert retrieve(index, "RCE")[0] is rce

    def test_single_containing_entry_first(self):
        entries = [
            entry("phishing", definition="Fraudulent messages that steal credentials."),
            entry("worm", definition="Self-replicating malware."),
            entry("trojan", definition="Malware disguised as a normal program."),
        ]
        index = index_lexicon(entries)
        results = retrieve(index, "phishing")
        assert results[0].term == "phishing"

    def test_empty_index(self):
        assert retrieve(index_lexicon([]), "anything") == []

    def test_no_hits_empty(self):
        index = index_lexicon([entry("worm", definition="Self-replicating malware.")])
        assert retrieve(index, "zzzz") == []

    def test_equal_scores_lexicographic(self):
        shared = "identical definition text"
        index = index_lexicon([entry("zeta", definition=shared), entry("alpha", definition=shared)])
        results = retrieve(index, "identical")
        assert [e.term for e in results] == ["alpha", "zeta"]

    def test_k_limits_results(self):
        entries = [entry(f"term{i}", definition="shared token here") for i in range(5)]
        index = index_lexicon(entries)
        assert len(retrieve(index, "shared", k=2)) == 2
        assert len(retrieve(index, "shared", k=10)) == 5

    def test_retrieval_deterministic(self):
        entries = [
            entry(f"term{i}", definition=f"token{i % 3} shared text number {i}") for i in range(20)
        ]
        index = index_lexicon(entries)
        first = [e.term for e in retrieve(index, "shared token1", k=5)]
        for _ in range(5):
            again = [e.term for e in retrieve(index, "shared token1", k=5)]
            assert again == first

    def test_thousand_entries_under_one_second(self):
        entries = [
            entry(f"term number {i}", definition=f"definition body {i} with shared words")
            for i in range(1000)
        ]
        start = time.perf_counter()
        index = index_lexicon(entries)
        assert time.perf_counter() - start < 1.0
        assert len(index) == 1000


# ---------------------------------------------------------------- explanation


def mention_for(matcher, text):
    mentions = matcher.find(text)
    assert mentions
    return mentions


class TestExplainTerms:
    def lexicon(self):
        return [
            entry("buffer overflow", definition="Writing past the end of a memory area."),
            entry("worm", definition="Self-replicating malware."),
        ]

    def test_grounded_explanation(self, server):
        server.chat(lambda text: "A short explanation.")
        entries = self.lexicon()
        index = index_lexicon(entries)
        matcher = LexiconMatcher(entries)
        mentions = mention_for(matcher, "A buffer overflow was reported.")
        llm = _ChatCallable(make_client(server.base_url))
        results = explain_terms(mentions, index, llm)
        assert len(results) == 1
        assert results[0].explained is True
        assert results[0].explanation == "A short explanation."
        assert len(results[0].evidence) >= 1
        assert results[0].error is None

    def test_prompt_carries_term_and_definition(self, server):
        server.chat_echo()
        entries = self.lexicon()
        index = index_lexicon(entries)
        mentions = LexiconMatcher(entries).find("A buffer overflow was reported.")
        results = explain_terms(mentions, index, _ChatCallable(make_client(server.base_url)))
        assert "buffer overflow" in results[0].explanation
        assert "Writing past the end of a memory area." in results[0].explanation

    def test_no_evidence_means_unexplained(self):
        index = index_lexicon(self.lexicon())
        matcher = LexiconMatcher([entry("heisenbug", definition="x")])
        mentions = matcher.find("A heisenbug appeared.")

        class ExplodingLlm:
            def chat(self, messages):
                raise AssertionError("must not be called without evidence")

        results = explain_terms(mentions, index, ExplodingLlm())
        assert results[0].explained is False
        assert results[0].evidence == []
        assert results[0].explanation == ""

    def test_generation_failure_recorded_not_fatal(self, server):
        calls = {"n": 0}

        def flaky(text):
            calls["n"] += 1
            if "worm" in text:
                raise RuntimeError("boom")
            return "ok"

        def handler(body):
            try:
                return 200, {"choices": [{"message": {"content": flaky(body["messages"][-1]["content"])}}]}
            except RuntimeError:
                return 400, {"error": "boom"}

        server.handlers["/v1/chat/completions"] = handler
        entries = self.lexicon()
        index = index_lexicon(entries)
        mentions = LexiconMatcher(entries).find("The worm exploits a buffer overflow.")
        assert len(mentions) == 2
        results = explain_terms(mentions, index, _ChatCallable(make_client(server.base_url)))
        by_term = {r.term.casefold(): r for r in results}
        assert by_term["worm"].explained is False
        assert by_term["worm"].error
        assert by_term["worm"].evidence  # retrieval succeeded, generation failed
        assert by_term["buffer overflow"].explained is True

    def test_unique_terms_deduplicated(self, server):
        server.chat(lambda text: "once")
        entries = self.lexicon()
        index = index_lexicon(entries)
        mentions = LexiconMatcher(entries).find("worm and WORM and Worm")
        assert len(mentions) == 3
        results = explain_terms(mentions, index, _ChatCallable(make_client(server.base_url)))
        assert len(results) == 1
        assert len(server.requests) == 1

    def test_empty_mentions(self):
        assert explain_terms([], index_lexicon(self.lexicon()), object()) == []

    def test_no_llm_configured(self):
        mentions = LexiconMatcher(self.lexicon()).find("A worm.")
        with pytest.raises(LlmUnavailable):
            explain_terms(mentions, index_lexicon(self.lexicon()), None)

    def test_parallel_same_results(self, server):
        server.chat(lambda text: "expl")
        entries = [entry(f"term{i}", definition=f"def {i}") for i in range(6)]
        index = index_lexicon(entries)
        mentions = LexiconMatcher(entries).find(" ".join(f"term{i}" for i in range(6)))
        llm = _ChatCallable(make_client(server.base_url))
        serial = explain_terms(mentions, index, llm, max_parallel=1)
        parallel = explain_terms(mentions, index, llm, max_parallel=4)
        assert [r.term for r in serial] == [r.term for r in parallel]
        assert all(r.explained for r in parallel)

    def test_grounding_invariant(self, server):
        server.chat(lambda text: "anything")
        entries = self.lexicon()
        index = index_lexicon(entries)
        matcher = LexiconMatcher(entries + [entry("ghost term", definition="z")])
        mentions = matcher.find("A worm, a buffer overflow, and a ghost term.")
        ghost_free_index = index_lexicon(self.lexicon())
        results = explain_terms(mentions, ghost_free_index, _ChatCallable(make_client(server.base_url)))
        for r in results:
            if r.explained:
                assert r.evidence
