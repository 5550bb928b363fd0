import math
import random
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sari_oracle import oracle_sari

from cvesimplify.metrics import EmptyReference, dsari, sari_components


class TestSariHandCases:
    def test_identity_is_one(self):
        toks = ["a", "b", "c", "d"]
        b = sari_components(toks, toks, toks, max_n=4)
        assert b.f_keep == 1.0
        assert b.f_add == 1.0
        assert b.p_del == 1.0

    def test_pure_addition_matching_reference(self):
        b = sari_components(["a", "b", "c", "d"], ["a", "b", "e"], ["a", "b", "e"], max_n=1)
        assert b.f_keep == 1.0
        assert b.f_add == 1.0
        assert b.p_del == 1.0

    def test_over_deletion(self):
        b = sari_components(["a", "b", "c", "d"], ["a", "b", "c"], ["a", "b"], max_n=1)
        assert b.f_keep == pytest.approx(0.8)
        assert b.f_add == 1.0
        assert b.p_del == 1.0

    def test_components_in_unit_interval(self):
        b = sari_components(["a", "a", "b"], ["a", "a", "a"], ["a", "b"], max_n=2)
        for value in (b.f_keep, b.f_add, b.p_del):
            assert 0.0 <= value <= 1.0


class TestOracleEquivalence:
    def test_200_random_triples(self):
        rng = random.Random(20250818)
        alphabet = ["a", "b", "c", "d", "e"]
        started = time.monotonic()
        for trial in range(200):
            docs = []
            for _ in range(3):
                length = rng.randint(0, 12)
                docs.append([rng.choice(alphabet) for _ in range(length)])
            i_doc, o_doc, r_doc = docs
            mine = sari_components(i_doc, o_doc, r_doc, max_n=4)
            f_keep, f_add, p_del = oracle_sari(i_doc, o_doc, r_doc, max_n=4)
            assert mine.f_keep == f_keep, (trial, i_doc, o_doc, r_doc)
            assert mine.f_add == f_add, (trial, i_doc, o_doc, r_doc)
            assert mine.p_del == p_del, (trial, i_doc, o_doc, r_doc)
        assert time.monotonic() - started < 10.0

    @given(
        st.lists(st.sampled_from("abcde"), max_size=10),
        st.lists(st.sampled_from("abcde"), max_size=10),
        st.lists(st.sampled_from("abcde"), max_size=10),
        st.integers(min_value=1, max_value=4),
    )
    @settings(max_examples=150, deadline=None)
    def test_oracle_equivalence_property(self, i_doc, o_doc, r_doc, max_n):
        mine = sari_components(i_doc, o_doc, r_doc, max_n=max_n)
        f_keep, f_add, p_del = oracle_sari(i_doc, o_doc, r_doc, max_n=max_n)
        assert mine.f_keep == f_keep
        assert mine.f_add == f_add
        assert mine.p_del == p_del

    @given(
        st.lists(st.sampled_from("abc"), max_size=8),
        st.lists(st.sampled_from("abc"), max_size=8),
        st.lists(st.sampled_from("abc"), max_size=8),
    )
    @settings(max_examples=150, deadline=None)
    def test_components_bounded(self, i_doc, o_doc, r_doc):
        b = sari_components(i_doc, o_doc, r_doc, max_n=4)
        for value in (b.f_keep, b.f_add, b.p_del):
            assert 0.0 <= value <= 1.0


class TestDsari:
    def test_hand_case(self):
        result = dsari("a b c d", "a b c", "a b", max_n=1)
        assert result.d_sari == pytest.approx(0.5661, abs=5e-4)

    def test_hand_case_details(self):
        result = dsari("a b c d", "a b c", "a b", max_n=1)
        assert result.slp == 1.0
        assert result.lp == pytest.approx(math.exp(-0.5))
        assert result.d_keep == pytest.approx(0.8 * math.exp(-0.5))
        assert result.d_add == pytest.approx(math.exp(-0.5))
        assert result.d_del == pytest.approx(math.exp(-0.5))

    def test_identity_is_one(self):
        text = "The flaw allows code execution. Update to 4.2.1 now."
        result = dsari(text, text, text)
        assert result.d_sari == pytest.approx(1.0, abs=1e-9)

    def test_identity_randomized_runtime(self):
        rng = random.Random(99)
        words = ["alpha", "beta", "gamma", "delta", "4.2", "overflow", "patch"]
        started = time.monotonic()
        for _ in range(50):
            length = rng.randint(1, 30)
            doc = " ".join(rng.choice(words) for _ in range(length))
            result = dsari(doc, doc, doc)
            assert abs(result.d_sari - 1.0) < 1e-9
        assert time.monotonic() - started < 1.0

    def test_empty_reference_rejected(self):
        with pytest.raises(EmptyReference):
            dsari("a b", "a", "")

    def test_sentence_penalty_applies_to_keep_only(self):
        # Output has 2 sentences, reference 1: slp < 1 hits d_keep, not d_add/d_del.
        result = dsari("A b c. D e.", "A b. C d.", "A b c d.", max_n=1)
        assert result.slp == pytest.approx(math.exp(-1.0))
        assert result.d_keep == pytest.approx(result.breakdown.f_keep * result.slp * result.lp)
        assert result.d_add == pytest.approx(result.breakdown.f_add * result.lp)
        assert result.d_del == pytest.approx(result.breakdown.p_del * result.lp)

    def test_dsari_mean_identity(self):
        result = dsari("a b c d", "b c", "a c d")
        assert result.d_sari == pytest.approx((result.d_keep + result.d_del + result.d_add) / 3)

    def test_penalties_never_exceed_components(self):
        result = dsari("a b c d e", "a c", "a b c")
        assert result.d_keep <= result.breakdown.f_keep + 1e-12
        assert result.d_add <= result.breakdown.f_add + 1e-12
        assert result.d_del <= result.breakdown.p_del + 1e-12
