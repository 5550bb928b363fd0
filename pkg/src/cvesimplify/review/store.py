"""Event-sourced persistence for survey rounds.

Every state change is one JSON line appended to the log; in-memory state is
derived and can always be rebuilt by replay. Writes are serialized through
a single lock, reads see the last completed write.
"""

from __future__ import annotations

import csv
import io
import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from .model import (
    ANSWERS,
    AcceptanceDecision,
    Statement,
    StatementStats,
    SurveyResponse,
    decide,
    statements_for_round,
)

EVENT_ROUND_CREATED = "round_created"
EVENT_RESPONSE_SUBMITTED = "response_submitted"
EVENT_ROUND_CLOSED = "round_closed"

STATUS_OPEN = "open"
STATUS_CLOSED = "closed"


class UnknownRound(Exception):
    pass


class DuplicateRound(Exception):
    pass


class RoundClosed(Exception):
    pass


class RoundOpen(Exception):
    pass


class UnknownTask(Exception):
    pass


class IncompleteAnswers(Exception):
    pass


class AcceptedDocIncluded(Exception):
    """Round-2 task list contains a document accepted in round 1."""


@dataclass
class Task:
    cve_id: str
    original: str
    versions: dict[str, str]  # version label ("v1", "v2") -> text


@dataclass
class RoundState:
    round_number: int
    status: str
    statements: tuple[Statement, ...]
    tasks: dict[str, Task]
    task_order: list[str]
    # (reviewer_id, cve_id) -> latest response; the log keeps the history.
    responses: dict[tuple[str, str], SurveyResponse] = field(default_factory=dict)
    submission_order: list[tuple[str, str]] = field(default_factory=list)
    decisions: dict[str, AcceptanceDecision] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)


class ReviewStore:
    def __init__(self, log_path: str | Path, clock=time.time):
        self._log_path = Path(log_path)
        self._clock = clock
        self._lock = threading.Lock()
        self._rounds: dict[int, RoundState] = {}
        if self._log_path.exists():
            self._replay()

    # -- event plumbing -----------------------------------------------------

    def _append(self, kind: str, payload: dict) -> None:
        event = {"ts": self._clock(), "kind": kind, "payload": payload}
        self._log_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self._log_path, "a", encoding="utf-8", newline="\n") as f:
            f.write(json.dumps(event, ensure_ascii=False) + "\n")
            f.flush()

    def _replay(self) -> None:
        with open(self._log_path, encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                event = json.loads(line)
                self._apply(event["kind"], event["payload"], event.get("ts", 0.0))

    def _apply(self, kind: str, payload: dict, ts: float) -> None:
        if kind == EVENT_ROUND_CREATED:
            statements = tuple(
                Statement(s["id"], s["text"], s["applies_to"]) for s in payload["statements"]
            )
            tasks = {
                t["cve_id"]: Task(t["cve_id"], t["original"], dict(t["versions"]))
                for t in payload["tasks"]
            }
            self._rounds[payload["round_number"]] = RoundState(
                round_number=payload["round_number"],
                status=STATUS_OPEN,
                statements=statements,
                tasks=tasks,
                task_order=[t["cve_id"] for t in payload["tasks"]],
            )
        elif kind == EVENT_RESPONSE_SUBMITTED:
            state = self._rounds[payload["round_number"]]
            resp = SurveyResponse(
                reviewer_id=payload["reviewer_id"],
                cve_id=payload["cve_id"],
                round=payload["round_number"],
                answers=dict(payload["answers"]),
                comment=payload.get("comment"),
                submitted_at=ts,
            )
            key = (resp.reviewer_id, resp.cve_id)
            if key not in state.responses:
                state.submission_order.append(key)
            state.responses[key] = resp
        elif kind == EVENT_ROUND_CLOSED:
            state = self._rounds[payload["round_number"]]
            state.status = STATUS_CLOSED
            state.warnings = list(payload.get("warnings", []))
            state.decisions = {
                d["cve_id"]: AcceptanceDecision(
                    cve_id=d["cve_id"],
                    round=payload["round_number"],
                    accepted=d["accepted"],
                    per_statement={
                        sid: StatementStats(sid, s["agree"], s["neutral"], s["disagree"])
                        for sid, s in d["per_statement"].items()
                    },
                    response_count=d["response_count"],
                )
                for d in payload["decisions"]
            }
        else:
            raise ValueError(f"unknown event kind {kind!r}")

    # -- queries ------------------------------------------------------------

    def _round(self, round_number: int) -> RoundState:
        state = self._rounds.get(round_number)
        if state is None:
            raise UnknownRound(f"no round {round_number}")
        return state

    def list_rounds(self) -> list[RoundState]:
        return [self._rounds[n] for n in sorted(self._rounds)]

    def get_round(self, round_number: int) -> RoundState:
        return self._round(round_number)

    def responses_for(self, round_number: int, cve_id: str) -> list[SurveyResponse]:
        state = self._round(round_number)
        return [
            state.responses[key]
            for key in state.submission_order
            if key[1] == cve_id
        ]

    def comments_for(self, round_number: int, cve_id: str) -> list[str]:
        return [
            r.comment
            for r in self.responses_for(round_number, cve_id)
            if r.comment and r.comment.strip()
        ]

    # -- commands -----------------------------------------------------------

    def create_round(
        self,
        round_number: int,
        tasks: list[Task],
        statements: tuple[Statement, ...] | None = None,
    ) -> RoundState:
        with self._lock:
            if round_number in self._rounds:
                raise DuplicateRound(f"round {round_number} already exists")
            if statements is None:
                statements = statements_for_round(round_number)
            prior = self._rounds.get(round_number - 1)
            if prior is not None and prior.decisions:
                accepted = {c for c, d in prior.decisions.items() if d.accepted}
                offenders = [t.cve_id for t in tasks if t.cve_id in accepted]
                if offenders:
                    raise AcceptedDocIncluded(
                        f"round {round_number} includes accepted docs: {', '.join(offenders)}"
                    )
            payload = {
                "round_number": round_number,
                "statements": [
                    {"id": s.id, "text": s.text, "applies_to": s.applies_to}
                    for s in statements
                ],
                "tasks": [
                    {"cve_id": t.cve_id, "original": t.original, "versions": t.versions}
                    for t in tasks
                ],
            }
            self._append(EVENT_ROUND_CREATED, payload)
            self._apply(EVENT_ROUND_CREATED, payload, 0.0)
            return self._rounds[round_number]

    def submit_response(
        self,
        round_number: int,
        reviewer_id: str,
        cve_id: str,
        answers: dict[str, str],
        comment: str | None = None,
    ) -> SurveyResponse:
        with self._lock:
            state = self._round(round_number)
            if state.status != STATUS_OPEN:
                raise RoundClosed(f"round {round_number} is closed")
            if cve_id not in state.tasks:
                raise UnknownTask(f"no task {cve_id} in round {round_number}")
            required = {s.id for s in state.statements}
            missing = required - set(answers)
            if missing:
                raise IncompleteAnswers(f"unanswered statements: {', '.join(sorted(missing))}")
            unknown = set(answers) - required
            if unknown:
                raise IncompleteAnswers(f"unknown statements: {', '.join(sorted(unknown))}")
            bad = {k: v for k, v in answers.items() if v not in ANSWERS}
            if bad:
                raise IncompleteAnswers(f"invalid answer values: {bad}")
            payload = {
                "round_number": round_number,
                "reviewer_id": reviewer_id,
                "cve_id": cve_id,
                "answers": dict(answers),
                "comment": comment,
            }
            ts = self._clock()
            event = {"ts": ts, "kind": EVENT_RESPONSE_SUBMITTED, "payload": payload}
            self._log_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self._log_path, "a", encoding="utf-8", newline="\n") as f:
                f.write(json.dumps(event, ensure_ascii=False) + "\n")
                f.flush()
            self._apply(EVENT_RESPONSE_SUBMITTED, payload, ts)
            return state.responses[(reviewer_id, cve_id)]

    def close_round(self, round_number: int) -> list[AcceptanceDecision]:
        with self._lock:
            state = self._round(round_number)
            if state.status != STATUS_OPEN:
                raise RoundClosed(f"round {round_number} is already closed")
            decisions = []
            warnings = []
            for cve_id in state.task_order:
                answer_maps = [
                    state.responses[key].answers
                    for key in state.submission_order
                    if key[1] == cve_id
                ]
                decision = decide(cve_id, round_number, state.statements, answer_maps)
                if decision.response_count == 0:
                    warnings.append(f"{cve_id}: no responses, marked not accepted")
                decisions.append(decision)
            payload = {
                "round_number": round_number,
                "warnings": warnings,
                "decisions": [
                    {
                        "cve_id": d.cve_id,
                        "accepted": d.accepted,
                        "response_count": d.response_count,
                        "per_statement": {
                            sid: {"agree": s.agree, "neutral": s.neutral, "disagree": s.disagree}
                            for sid, s in d.per_statement.items()
                        },
                    }
                    for d in decisions
                ],
            }
            self._append(EVENT_ROUND_CLOSED, payload)
            self._apply(EVENT_ROUND_CLOSED, payload, 0.0)
            return decisions

    # -- export -------------------------------------------------------------

    def report(self, round_number: int) -> dict:
        """Export payload for a closed round: per-(cve, statement) counts,
        decisions, and comment bundles."""
        state = self._round(round_number)
        if state.status != STATUS_CLOSED:
            raise RoundOpen(f"round {round_number} is still open")
        rows = []
        for cve_id in state.task_order:
            decision = state.decisions[cve_id]
            for st in state.statements:
                stats = decision.per_statement[st.id]
                rows.append(
                    {
                        "cve_id": cve_id,
                        "statement_id": st.id,
                        "agree": stats.agree,
                        "neutral": stats.neutral,
                        "disagree": stats.disagree,
                        "agree_fraction": round(stats.agree_fraction, 6),
                        "accepted": decision.accepted,
                    }
                )
        comments = {
            cve_id: self.comments_for(round_number, cve_id) for cve_id in state.task_order
        }
        comments = {c: v for c, v in comments.items() if v}
        return {
            "round_number": round_number,
            "status": state.status,
            "warnings": list(state.warnings),
            "rows": rows,
            "decisions": [
                {
                    "cve_id": d.cve_id,
                    "accepted": d.accepted,
                    "response_count": d.response_count,
                }
                for d in (state.decisions[c] for c in state.task_order)
            ],
            "comments": comments,
            "csv": self._rows_to_csv(rows),
        }

    @staticmethod
    def _rows_to_csv(rows: list[dict]) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["cve_id", "statement_id", "agree", "neutral", "disagree", "agree_fraction", "accepted"]
        )
        for row in rows:
            writer.writerow(
                [
                    row["cve_id"],
                    row["statement_id"],
                    row["agree"],
                    row["neutral"],
                    row["disagree"],
                    row["agree_fraction"],
                    str(row["accepted"]).lower(),
                ]
            )
        return buf.getvalue()

    def export_round(self, round_number: int, out_dir: str | Path) -> Path:
        """Write the CSV and one comments file per commented CVE; returns the
        CSV path."""
        payload = self.report(round_number)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / f"round{round_number}_results.csv"
        with open(csv_path, "w", encoding="utf-8", newline="\n") as f:
            f.write(payload["csv"])
        if payload["comments"]:
            comments_dir = out / f"round{round_number}_comments"
            comments_dir.mkdir(exist_ok=True)
            for cve_id, comments in payload["comments"].items():
                with open(comments_dir / f"{cve_id}.txt", "w", encoding="utf-8", newline="\n") as f:
                    for comment in comments:
                        f.write(comment + "\n")
        return csv_path
