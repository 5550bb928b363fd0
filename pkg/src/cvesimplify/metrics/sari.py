"""Keep/add/delete n-gram scores and their document-level penalized variant.

All n-gram overlap is multiset (count-clipped): intersection takes the
per-gram minimum, difference subtracts with saturation. Ratios whose
denominator is empty score 1 (vacuous success), which makes the identity
case come out at exactly 1.0.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .. import textproc
from ..textproc import TokenSequence


class EmptyReference(Exception):
    """The reference document has no tokens."""


@dataclass(frozen=True)
class SariBreakdown:
    """Keep/add/delete scores averaged over n-gram orders 1..max_n."""

    f_keep: float
    f_add: float
    p_del: float
    max_n: int


@dataclass(frozen=True)
class DsariResult:
    d_keep: float
    d_add: float
    d_del: float
    d_sari: float
    slp: float
    lp: float
    breakdown: SariBreakdown


def _total(counter: Counter) -> int:
    return sum(counter.values())


def _ratio(numerator: Counter, denominator: Counter) -> float:
    den = _total(denominator)
    if den == 0:
        return 1.0
    return _total(numerator) / den


def _harmonic(p: float, r: float) -> float:
    if p + r == 0:
        return 0.0
    return 2 * p * r / (p + r)


def _as_tokens(seq) -> list[str]:
    if isinstance(seq, TokenSequence):
        return seq.non_punct()
    return list(seq)


def sari_components(
    input_tokens, output_tokens, reference_tokens, max_n: int = 4
) -> SariBreakdown:
    """Keep/add/delete scores over n-gram multisets for n = 1..max_n.

    With I, O, R the n-gram multisets of input, output and reference:
    keep is the harmonic mean of |I&O&R|/|I&O| and |I&O&R|/|I&R|; add is
    the harmonic mean of |(O-I)&(R-I)|/|O-I| and |(O-I)&(R-I)|/|R-I|;
    delete is the precision |(I-O)&(I-R)|/|I-O|. The good-additions
    multiset is intersected with R-I (not R) so every numerator stays
    contained in its denominator even when the output repeats input grams.
    """
    i_toks = _as_tokens(input_tokens)
    o_toks = _as_tokens(output_tokens)
    r_toks = _as_tokens(reference_tokens)

    keep_scores, add_scores, del_scores = [], [], []
    for n in range(1, max_n + 1):
        i = textproc.ngrams(i_toks, n)
        o = textproc.ngrams(o_toks, n)
        r = textproc.ngrams(r_toks, n)

        kept = i & o
        kept_good = kept & r
        keep_scores.append(_harmonic(_ratio(kept_good, kept), _ratio(kept_good, i & r)))

        added = o - i
        ref_new = r - i
        added_good = added & ref_new
        add_scores.append(_harmonic(_ratio(added_good, added), _ratio(added_good, ref_new)))

        deleted = i - o
        del_scores.append(_ratio(deleted & (i - r), deleted))

    k = float(max_n)
    return SariBreakdown(
        f_keep=sum(keep_scores) / k,
        f_add=sum(add_scores) / k,
        p_del=sum(del_scores) / k,
        max_n=max_n,
    )


def dsari(input_doc: str, output_doc: str, reference_doc: str, max_n: int = 4) -> DsariResult:
    """Document-level score: keep/add/delete with length and sentence-count
    penalties.

    LP = exp(-|L_out - L_ref| / L_ref) over non-punct token counts and
    SLP = exp(-|S_out - S_ref| / max(1, S_ref)) over sentence counts; the
    keep score takes both penalties, add and delete take LP. Both factors
    are 1 at equality and decay smoothly with divergence.
    """
    in_tokens = textproc.tokenize(input_doc)
    out_tokens = textproc.tokenize(output_doc)
    ref_tokens = textproc.tokenize(reference_doc)

    l_ref = len(ref_tokens.non_punct())
    if l_ref == 0:
        raise EmptyReference("reference document has no tokens")
    l_out = len(out_tokens.non_punct())

    s_out = len(textproc.split_sentences(output_doc))
    s_ref = len(textproc.split_sentences(reference_doc))

    lp = math.exp(-abs(l_out - l_ref) / l_ref)
    slp = math.exp(-abs(s_out - s_ref) / max(1, s_ref))

    breakdown = sari_components(in_tokens, out_tokens, ref_tokens, max_n=max_n)
    d_keep = breakdown.f_keep * slp * lp
    d_add = breakdown.f_add * lp
    d_del = breakdown.p_del * lp
    return DsariResult(
        d_keep=d_keep,
        d_add=d_add,
        d_del=d_del,
        d_sari=(d_keep + d_del + d_add) / 3,
        slp=slp,
        lp=lp,
        breakdown=breakdown,
    )
