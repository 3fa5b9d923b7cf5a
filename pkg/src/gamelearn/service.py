"""HTTP layer: thin authenticated adapters over the application core.

Routes are served both at the bare paths and under the /v1 prefix. Every
error carries a machine-readable code mirroring the engine error taxonomy.
Learners can only touch their own enrollment; course-wide reads require an
instructor or admin account.
"""

from __future__ import annotations

import os
import secrets
import threading
from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Any, Mapping

from fastapi import APIRouter, Depends, FastAPI, Header, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from .assessment import default_instrument
from .errors import (
    AccessError,
    AuthError,
    ConflictError,
    ForbiddenError,
    GamelearnError,
    NotFoundError,
    PreconditionError,
    ValidationError,
)
from .store import AppCore

_STATUS_BY_CODE = {
    "validation_error": 400,
    "auth_error": 401,
    "forbidden": 403,
    "access_error": 403,
    "not_found": 404,
    "conflict": 409,
    "precondition_failed": 412,
    "configuration_error": 500,
    "derivation_error": 500,
    "error": 500,
}


@dataclass
class ServiceConfig:
    bind_host: str = "127.0.0.1"
    bind_port: int = 8000
    storage_path: str | None = None
    session_ttl_seconds: int = 3600
    pass_threshold_pct: float | None = None

    @classmethod
    def from_env(cls, env: Mapping[str, str] | None = None) -> "ServiceConfig":
        env = env if env is not None else os.environ
        bind = env.get("GAMELEARN_BIND", "127.0.0.1:8000")
        host, _, port = bind.rpartition(":")
        threshold = env.get("GAMELEARN_PASS_THRESHOLD")
        return cls(
            bind_host=host or "127.0.0.1",
            bind_port=int(port),
            storage_path=env.get("GAMELEARN_STORAGE"),
            session_ttl_seconds=int(env.get("GAMELEARN_SESSION_TTL", "3600")),
            pass_threshold_pct=float(threshold) if threshold else None,
        )


class RegisterBody(BaseModel):
    user_name: str
    user_mail: str
    credential: str
    role: str = "learner"


class LoginBody(BaseModel):
    name_or_mail: str
    credential: str


class EnrollBody(BaseModel):
    answers: dict[int, str]


class AttemptBody(BaseModel):
    course_id: str | None = None
    answers: list[str | None] | None = None
    instructor_score: int | None = None
    learner_id: str | None = None  # instructor grading on a learner's behalf
    time_spent_seconds: int = 0


class EvaluationBody(BaseModel):
    answers: dict[int, int]


class SessionStore:
    def __init__(self, ttl_seconds: int):
        self.ttl = ttl_seconds
        self._sessions: dict[str, tuple[str, datetime]] = {}

    def issue(self, user_id: str) -> str:
        token = secrets.token_hex(16)
        self._sessions[token] = (user_id, datetime.now() + timedelta(seconds=self.ttl))
        return token

    def resolve(self, token: str) -> str:
        entry = self._sessions.get(token)
        if entry is None:
            raise AuthError("unknown session token")
        user_id, expires = entry
        if datetime.now() > expires:
            del self._sessions[token]
            raise AuthError("session expired")
        return user_id


def create_app(core: AppCore | None = None, config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    core = core or AppCore(
        storage_path=config.storage_path, pass_threshold_pct=config.pass_threshold_pct
    )
    sessions = SessionStore(config.session_ttl_seconds)
    lock = threading.Lock()
    app = FastAPI(title="gamelearn", version="1.0")
    app.state.core = core
    app.state.config = config
    router = APIRouter()

    @app.exception_handler(GamelearnError)
    async def engine_error(_request: Request, exc: GamelearnError):
        return JSONResponse(
            status_code=_STATUS_BY_CODE.get(exc.code, 500),
            content={"error": {"code": exc.code, "message": str(exc)}},
        )

    def current_user(authorization: str | None = Header(default=None)):
        if not authorization or not authorization.startswith("Bearer "):
            raise AuthError("missing bearer token")
        user_id = sessions.resolve(authorization.removeprefix("Bearer "))
        return core.accounts[user_id]

    def require_staff(account) -> None:
        if account.role not in ("instructor", "admin"):
            raise ForbiddenError("instructor or admin role required")

    @router.post("/register", status_code=201)
    def register(body: RegisterBody):
        with lock:
            account = core.register(body.user_name, body.user_mail, body.credential, body.role)
        return {
            "user_id": account.user_id,
            "user_name": account.user_name,
            "user_mail": account.user_mail,
            "role": account.role,
        }

    @router.post("/login")
    def login(body: LoginBody):
        account = core.authenticate(body.name_or_mail, body.credential)
        return {
            "token": sessions.issue(account.user_id),
            "user_id": account.user_id,
            "ttl_seconds": config.session_ttl_seconds,
        }

    @router.get("/assessment")
    def assessment_items(account=Depends(current_user)):
        # item wording only; pole keying stays server-side
        instrument = default_instrument()
        return {
            "items": [
                {
                    "number": item.item_id,
                    "prompt": item.text,
                    "option_a": item.option_a,
                    "option_b": item.option_b,
                }
                for item in instrument.items
            ]
        }

    @router.post("/courses/{course_id}/enroll", status_code=201)
    def enroll(course_id: str, body: EnrollBody, account=Depends(current_user)):
        with lock:
            core.enroll(account.user_id, course_id, body.answers)
            return core.get_state(account.user_id, course_id)

    @router.get("/courses/{course_id}/state")
    def get_state(course_id: str, learner_id: str | None = None, account=Depends(current_user)):
        target = learner_id or account.user_id
        if target != account.user_id:
            require_staff(account)
        with lock:
            return core.get_state(target, course_id)

    @router.get("/courses/{course_id}/content/{node_id}")
    def view_content(course_id: str, node_id: str, account=Depends(current_user)):
        with lock:
            effects = core.view_content(account.user_id, course_id, node_id)
            enrollment = core.enrollments[(account.user_id, course_id)]
            now = datetime.now()
            rendered = []
            for e in effects:
                details = dict(e.details)
                if e.effect_kind.value == "timer_started":
                    # server-anchored countdown: the client gets an absolute
                    # deadline plus the server clock to correct for skew
                    limit = int(details["time_limit_seconds"])
                    details["server_now"] = now.isoformat()
                    details["deadline"] = (now + timedelta(seconds=limit)).isoformat()
                rendered.append(
                    {
                        "kind": e.effect_kind.value,
                        "element": e.element.element_id if e.element else None,
                        "surfaced": e.surfaced,
                        "details": details,
                    }
                )
            return {
                "node_id": node_id,
                "state": enrollment.state_of(node_id).value,
                "effects": rendered,
            }

    @router.post("/courses/{course_id}/lessons/{lesson_id}/complete")
    def complete_lesson(course_id: str, lesson_id: str, account=Depends(current_user)):
        with lock:
            core.complete_lesson(account.user_id, course_id, lesson_id)
            return core.get_state(account.user_id, course_id)

    @router.post("/quizzes/{quiz_id}/attempts", status_code=201)
    def submit_attempt(quiz_id: str, body: AttemptBody, account=Depends(current_user)):
        course_id = body.course_id
        if course_id is None:
            course_id = next(
                (
                    cid
                    for cid, c in core.courses.items()
                    if any(quiz_id == q for q in c.step_ids())
                ),
                None,
            )
            if course_id is None:
                raise NotFoundError(f"unknown quiz {quiz_id}")
        learner_id = account.user_id
        if body.instructor_score is not None:
            require_staff(account)
            if not body.learner_id:
                raise ValidationError("instructor grading requires learner_id")
            learner_id = body.learner_id
        with lock:
            result, delta, effects = core.submit_quiz(
                learner_id,
                course_id,
                quiz_id,
                answers=body.answers,
                instructor_score=body.instructor_score,
                time_spent_seconds=body.time_spent_seconds,
            )
            return {
                "score": result.score,
                "total": result.total,
                "percentage": result.percentage,
                "points": result.points,
                "passed": result.passed,
                "unlocked": [
                    {"node_id": n, "state": s.value} for n, s in delta.changes
                ],
                "course_completed": delta.course_completed,
                "effects": [
                    {
                        "kind": e.effect_kind.value,
                        "element": e.element.element_id if e.element else None,
                        "surfaced": e.surfaced,
                        "details": dict(e.details),
                    }
                    for e in effects
                ],
            }

    @router.get("/courses/{course_id}/leaderboard")
    def leaderboard(course_id: str, account=Depends(current_user)):
        with lock:
            if account.role == "learner":
                enrollment = core._enrollment(account.user_id, course_id)
                active = core.mapping.entries[enrollment.core]
                if not any(e.element_id == "competition" for e in active):
                    raise ForbiddenError("leaderboard is not part of this learner's experience")
            rows = core.leaderboard(course_id)
        return {
            "rows": [
                {
                    "rank": r.rank,
                    "learner_id": r.learner_id,
                    "points_total": r.points_total,
                }
                for r in rows
            ]
        }

    @router.post("/courses/{course_id}/evaluation", status_code=201)
    def submit_evaluation(course_id: str, body: EvaluationBody, account=Depends(current_user)):
        with lock:
            response = core.submit_evaluation(account.user_id, course_id, body.answers)
        return {"learner_id": response.learner_id, "statement_count": len(response.answers)}

    @router.get("/admin/courses/{course_id}/logs.csv")
    def export_logs(course_id: str, account=Depends(current_user)):
        require_staff(account)
        with lock:
            return PlainTextResponse(core.export_logs(course_id), media_type="text/csv")

    @router.get("/admin/courses/{course_id}/report")
    def report(course_id: str, account=Depends(current_user)) -> Any:
        require_staff(account)
        with lock:
            return core.report(course_id)

    app.include_router(router)
    app.include_router(router, prefix="/v1")
    return app


def main() -> None:
    """Entry point used by the `serve` CLI subcommand."""
    import uvicorn

    config = ServiceConfig.from_env()
    uvicorn.run(create_app(config=config), host=config.bind_host, port=config.bind_port)
