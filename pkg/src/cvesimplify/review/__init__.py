from .model import (
    AGREE_THRESHOLD,
    ANSWER_AGREE,
    ANSWER_DISAGREE,
    ANSWER_NEUTRAL,
    ANSWERS,
    APPLIES_COMPARISON,
    APPLIES_V1,
    APPLIES_V2,
    ROUND1_STATEMENTS,
    ROUND2_STATEMENTS,
    AcceptanceDecision,
    Statement,
    StatementStats,
    SurveyResponse,
    decide,
    statements_for_round,
)
from .store import (
    EVENT_RESPONSE_SUBMITTED,
    EVENT_ROUND_CLOSED,
    EVENT_ROUND_CREATED,
    STATUS_CLOSED,
    STATUS_OPEN,
    AcceptedDocIncluded,
    DuplicateRound,
    IncompleteAnswers,
    ReviewStore,
    RoundClosed,
    RoundOpen,
    RoundState,
    Task,
    UnknownRound,
    UnknownTask,
)
from .service import ADMIN_TOKEN_HEADER, create_app

__all__ = [
    "AGREE_THRESHOLD",
    "ANSWER_AGREE",
    "ANSWER_DISAGREE",
    "ANSWER_NEUTRAL",
    "ANSWERS",
    "APPLIES_COMPARISON",
    "APPLIES_V1",
    "APPLIES_V2",
    "ROUND1_STATEMENTS",
    "ROUND2_STATEMENTS",
    "AcceptanceDecision",
    "Statement",
    "StatementStats",
    "SurveyResponse",
    "decide",
    "statements_for_round",
    "EVENT_RESPONSE_SUBMITTED",
    "EVENT_ROUND_CLOSED",
    "EVENT_ROUND_CREATED",
    "STATUS_CLOSED",
    "STATUS_OPEN",
    "AcceptedDocIncluded",
    "DuplicateRound",
    "IncompleteAnswers",
    "ReviewStore",
    "RoundClosed",
    "RoundOpen",
    "RoundState",
    "Task",
    "UnknownRound",
    "UnknownTask",
    "ADMIN_TOKEN_HEADER",
    "create_app",
]
