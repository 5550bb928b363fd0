"""Survey statements, responses, and the acceptance rule.

A simplification is accepted when every statement drew strictly more than
80% agree answers and zero disagree answers. Neutral answers count toward
the denominator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

ANSWER_AGREE = "agree"
ANSWER_NEUTRAL = "neutral"
ANSWER_DISAGREE = "disagree"
ANSWERS = frozenset({ANSWER_AGREE, ANSWER_NEUTRAL, ANSWER_DISAGREE})

AGREE_THRESHOLD = 0.8

APPLIES_V1 = "v1"
APPLIES_V2 = "v2"
APPLIES_COMPARISON = "comparison"


@dataclass(frozen=True)
class Statement:
    id: str
    text: str
    applies_to: str = APPLIES_V1

    def __post_init__(self):
        if self.applies_to not in (APPLIES_V1, APPLIES_V2, APPLIES_COMPARISON):
            raise ValueError(f"unknown applies_to {self.applies_to!r}")


ROUND1_STATEMENTS = (
    Statement("easier", "The simplification is easier to understand than the original", APPLIES_V1),
    Statement("meaning", "The simplification preserves the meaning of the original text", APPLIES_V1),
)

# The comparison wording is fixed; the two per-version quality wordings are
# editable round configuration.
ROUND2_STATEMENTS = (
    Statement("v1_quality", "The first simplification is of good quality", APPLIES_V1),
    Statement("v2_quality", "The second simplification is of good quality", APPLIES_V2),
    Statement(
        "better",
        "The second round simplification is of better quality than the first",
        APPLIES_COMPARISON,
    ),
)


def statements_for_round(round_number: int) -> tuple[Statement, ...]:
    return ROUND1_STATEMENTS if round_number == 1 else ROUND2_STATEMENTS


@dataclass(frozen=True)
class SurveyResponse:
    reviewer_id: str
    cve_id: str
    round: int
    answers: dict[str, str]
    comment: str | None = None
    submitted_at: float = 0.0


@dataclass(frozen=True)
class StatementStats:
    statement_id: str
    agree: int
    neutral: int
    disagree: int

    @property
    def total(self) -> int:
        return self.agree + self.neutral + self.disagree

    @property
    def agree_fraction(self) -> float:
        return self.agree / self.total if self.total else 0.0


@dataclass(frozen=True)
class AcceptanceDecision:
    cve_id: str
    round: int
    accepted: bool
    per_statement: dict[str, StatementStats] = field(default_factory=dict)
    response_count: int = 0


def decide(
    cve_id: str,
    round_number: int,
    statements: tuple[Statement, ...],
    answer_maps: list[dict[str, str]],
) -> AcceptanceDecision:
    """Apply the acceptance rule to one document's responses.

    answer_maps holds one statement_id -> answer map per reviewer (latest
    submission per reviewer). Zero responses never accept.
    """
    per: dict[str, StatementStats] = {}
    accepted = bool(answer_maps)
    for st in statements:
        agree = sum(1 for m in answer_maps if m.get(st.id) == ANSWER_AGREE)
        neutral = sum(1 for m in answer_maps if m.get(st.id) == ANSWER_NEUTRAL)
        disagree = sum(1 for m in answer_maps if m.get(st.id) == ANSWER_DISAGREE)
        stats = StatementStats(st.id, agree, neutral, disagree)
        per[st.id] = stats
        if not (stats.agree_fraction > AGREE_THRESHOLD and disagree == 0):
            accepted = False
    return AcceptanceDecision(
        cve_id=cve_id,
        round=round_number,
        accepted=accepted,
        per_statement=per,
        response_count=len(answer_maps),
    )
