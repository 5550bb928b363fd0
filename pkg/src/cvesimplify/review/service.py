"""HTTP API over the review store, plus static serving of the survey webui."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Header, HTTPException, Query
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .store import (
    IncompleteAnswers,
    ReviewStore,
    RoundClosed,
    RoundOpen,
    UnknownRound,
    UnknownTask,
)

ADMIN_TOKEN_HEADER = "x-admin-token"


class ResponseBody(BaseModel):
    reviewer_id: str
    answers: dict[str, str]
    comment: str | None = None


def _round_summary(state) -> dict:
    return {
        "round_number": state.round_number,
        "status": state.status,
        "task_count": len(state.task_order),
        "statements": [
            {"id": s.id, "text": s.text, "applies_to": s.applies_to}
            for s in state.statements
        ],
    }


def create_app(
    store: ReviewStore,
    admin_token: str = "",
    webui_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="simplification review service")

    @app.get("/api/rounds")
    def list_rounds():
        return [_round_summary(s) for s in store.list_rounds()]

    @app.get("/api/rounds/{round_number}/tasks")
    def round_tasks(round_number: int, reviewer: str = Query(default="")):
        try:
            state = store.get_round(round_number)
        except UnknownRound as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        tasks = []
        for cve_id in state.task_order:
            task = state.tasks[cve_id]
            prior = state.responses.get((reviewer, cve_id)) if reviewer else None
            tasks.append(
                {
                    "cve_id": cve_id,
                    "original": task.original,
                    "versions": task.versions,
                    "prior": (
                        {"answers": prior.answers, "comment": prior.comment}
                        if prior is not None
                        else None
                    ),
                }
            )
        summary = _round_summary(state)
        summary["tasks"] = tasks
        return summary

    @app.post("/api/rounds/{round_number}/tasks/{cve_id}/response")
    def submit(round_number: int, cve_id: str, body: ResponseBody):
        try:
            stored = store.submit_response(
                round_number,
                reviewer_id=body.reviewer_id,
                cve_id=cve_id,
                answers=body.answers,
                comment=body.comment,
            )
        except RoundClosed as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except IncompleteAnswers as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except (UnknownRound, UnknownTask) as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {
            "reviewer_id": stored.reviewer_id,
            "cve_id": stored.cve_id,
            "round": stored.round,
            "answers": stored.answers,
            "comment": stored.comment,
        }

    @app.post("/api/rounds/{round_number}/close")
    def close(round_number: int, x_admin_token: str = Header(default="")):
        if admin_token and x_admin_token != admin_token:
            raise HTTPException(status_code=403, detail="bad admin token")
        try:
            decisions = store.close_round(round_number)
        except UnknownRound as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except RoundClosed as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return [
            {
                "cve_id": d.cve_id,
                "accepted": d.accepted,
                "response_count": d.response_count,
            }
            for d in decisions
        ]

    @app.get("/api/rounds/{round_number}/report")
    def report(round_number: int):
        try:
            return store.report(round_number)
        except UnknownRound as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except RoundOpen as exc:
            raise HTTPException(status_code=409, detail=str(exc))

    if webui_dir is not None and Path(webui_dir).is_dir():
        # Mounted last so /api keeps priority.
        app.mount("/", StaticFiles(directory=str(webui_dir), html=True), name="webui")

    return app
