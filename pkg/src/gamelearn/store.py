"""Durable application core.

Every state change is a JSON line appended to an event log; all read models
(enrollments, points, leaderboard, telemetry) are rebuilt by replaying that
log, which is what makes crash recovery a plain re-read. Command methods
validate, apply, then append; replay applies without appending.
"""

from __future__ import annotations

import hashlib
import json
import os
import secrets
from dataclasses import dataclass, field
from datetime import date, datetime
from pathlib import Path
from typing import Any, Iterable, Mapping

from . import course as course_mod
from . import runtime, telemetry
from .assessment import AssessmentResponse, CognitiveCore
from .catalog import ElementMapping, deployed_mapping
from .course import AttemptResult, CourseGraph, LearnerEnrollment, NodeState, UnlockDelta
from .errors import (
    AccessError,
    AuthError,
    ConflictError,
    NotFoundError,
    PreconditionError,
    ValidationError,
)
from .runtime import ActivityEvent, ElementEffect, EventKind, GamificationState


@dataclass(frozen=True)
class UserAccount:
    user_id: str
    user_name: str
    user_mail: str
    role: str
    credential_hash: str
    salt: str
    created_at: datetime

    def check_credential(self, credential: str) -> bool:
        return _hash_credential(credential, self.salt) == self.credential_hash


def _hash_credential(credential: str, salt: str) -> str:
    return hashlib.pbkdf2_hmac(
        "sha256", credential.encode(), bytes.fromhex(salt), 20_000
    ).hex()


_ROLES = {"learner", "instructor", "admin"}


class EventLog:
    """Append-only JSON-lines file; in-memory when no path is given."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path else None
        self._memory: list[dict] = []

    def append(self, event: dict) -> None:
        if self.path is None:
            self._memory.append(event)
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a") as fh:
            fh.write(json.dumps(event, sort_keys=True) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def __iter__(self):
        if self.path is None:
            yield from list(self._memory)
            return
        if not self.path.exists():
            return
        with open(self.path) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    yield json.loads(line)


class AppCore:
    """Engine facade plus storage. One instance per storage path."""

    def __init__(
        self,
        storage_path: str | Path | None = None,
        courses: Iterable[CourseGraph] | None = None,
        mapping: ElementMapping | None = None,
        pass_threshold_pct: float | None = None,
    ):
        self.log = EventLog(storage_path)
        self.mapping = mapping or deployed_mapping()
        self.pass_threshold_override = pass_threshold_pct
        self.courses: dict[str, CourseGraph] = {}
        for course in courses if courses is not None else [course_mod.default_course()]:
            self.courses[course.course_id] = course

        self.accounts: dict[str, UserAccount] = {}
        self._by_name: dict[str, str] = {}
        self._by_mail: dict[str, str] = {}
        self.enrollments: dict[tuple[str, str], LearnerEnrollment] = {}
        self.gam: dict[tuple[str, str], GamificationState] = {}
        self.effects: dict[tuple[str, str], list[ElementEffect]] = {}
        self.activity_logs: dict[str, telemetry.ActivityLog] = {
            cid: telemetry.ActivityLog() for cid in self.courses
        }
        self.evaluations: dict[str, list[telemetry.EvaluationResponse]] = {
            cid: [] for cid in self.courses
        }
        self._seq = 0
        self._next_user_number = 101

        for event in self.log:
            self._apply(event)

    # ---- helpers -------------------------------------------------------

    def _course(self, course_id: str) -> CourseGraph:
        if course_id not in self.courses:
            raise NotFoundError(f"unknown course {course_id}")
        return self.courses[course_id]

    def _enrollment(self, user_id: str, course_id: str) -> LearnerEnrollment:
        key = (user_id, course_id)
        if key not in self.enrollments:
            raise NotFoundError(f"user {user_id} is not enrolled in course {course_id}")
        return self.enrollments[key]

    def _threshold(self, course: CourseGraph) -> float:
        if self.pass_threshold_override is not None:
            return self.pass_threshold_override
        return course.pass_threshold_pct

    def _commit(self, event: dict) -> Any:
        event["seq"] = self._seq
        result = self._apply(event)
        self.log.append(event)
        return result

    def _reduce(
        self, user_id: str, course_id: str, kind: EventKind, payload: dict, at: datetime
    ) -> list[ElementEffect]:
        key = (user_id, course_id)
        enrollment = self.enrollments[key]
        active = self.mapping.entries[enrollment.core]
        event = ActivityEvent(
            event_id=f"e{self._seq}",
            learner_id=user_id,
            course_id=course_id,
            kind=kind,
            payload=payload,
            occurred_at=at,
        )
        effects, self.gam[key] = runtime.reduce(event, active, self.gam[key])
        self.effects[key].extend(effects)
        return effects

    # ---- apply (replayable) --------------------------------------------

    def _apply(self, event: dict) -> Any:
        self._seq = event["seq"] + 1
        kind = event["kind"]
        at = datetime.fromisoformat(event["at"])
        if kind == "user_registered":
            account = UserAccount(
                user_id=event["user_id"],
                user_name=event["user_name"],
                user_mail=event["user_mail"],
                role=event["role"],
                credential_hash=event["credential_hash"],
                salt=event["salt"],
                created_at=at,
            )
            self.accounts[account.user_id] = account
            self._by_name[account.user_name] = account.user_id
            self._by_mail[account.user_mail] = account.user_id
            number = int(event["user_id"]) if event["user_id"].isdigit() else 0
            self._next_user_number = max(self._next_user_number, number + 1)
            return account
        if kind == "enrolled":
            return self._apply_enroll(event, at)
        if kind == "content_viewed":
            return self._apply_view(event, at)
        if kind == "lesson_completed":
            return self._apply_lesson(event, at)
        if kind == "quiz_attempted":
            return self._apply_attempt(event, at)
        if kind == "evaluation_submitted":
            return self._apply_evaluation(event, at)
        raise ValidationError(f"unknown event kind {kind!r}")

    def _apply_enroll(self, event: dict, at: datetime):
        user_id, course_id = event["user_id"], event["course_id"]
        course = self._course(course_id)
        response = AssessmentResponse(
            learner_id=user_id,
            answers={int(k): v for k, v in event["answers"].items()},
            completed_at=at,
        )
        enrollment = course_mod.enroll(user_id, course, response, at)
        key = (user_id, course_id)
        self.enrollments[key] = enrollment
        self.gam[key] = GamificationState(learner_id=user_id, course_id=course_id)
        self.effects[key] = []
        self._reduce(
            user_id,
            course_id,
            EventKind.ENROLLED,
            {
                "total_steps": course.total_steps,
                "gates": dict(course.economy_gates),
                "variants": list(enrollment.variants),
            },
            at,
        )
        return enrollment

    def _gate_block(self, user_id: str, course_id: str, topic_id: str):
        """Economy-active learners cannot open content in a still-closed gated
        topic; everyone else is unaffected."""
        course = self.courses[course_id]
        key = (user_id, course_id)
        enrollment = self.enrollments[key]
        if not any(e.element_id == "economy" for e in self.mapping.entries[enrollment.core]):
            return
        cost = course.economy_gates.get(topic_id)
        if cost is None:
            return
        state = self.gam[key]
        status = runtime.economy_gate_check(state.points_total, cost)
        if not status.open:
            raise AccessError(
                f"topic {topic_id} needs {cost} points; short by {status.deficit}"
            )

    def _apply_view(self, event: dict, at: datetime):
        user_id, course_id, node_id = event["user_id"], event["course_id"], event["node_id"]
        course = self._course(course_id)
        enrollment = self._enrollment(user_id, course_id)
        topic = course.topic_of(node_id)
        self._gate_block(user_id, course_id, topic.topic_id)
        course_mod.revisit(enrollment, node_id, at)
        payload: dict = {"node_id": node_id}
        try:
            _, _, quiz = course.find_quiz(node_id)
            payload["quiz_id"] = quiz.quiz_id
            payload["time_limit_seconds"] = quiz.time_limit_seconds
        except ValidationError:
            pass
        return self._reduce(user_id, course_id, EventKind.CONTENT_VIEWED, payload, at)

    def _delta_payload(self, enrollment: LearnerEnrollment, delta: UnlockDelta) -> dict:
        return {
            "steps_completed": enrollment.completed_steps,
            "topics_completed": list(delta.topics_completed),
            "course_completed": delta.course_completed,
        }

    def _apply_lesson(self, event: dict, at: datetime):
        user_id, course_id = event["user_id"], event["course_id"]
        course = self._course(course_id)
        enrollment = self._enrollment(user_id, course_id)
        topic = course.topic_of(event["lesson_id"])
        self._gate_block(user_id, course_id, topic.topic_id)
        delta = course_mod.complete_lesson(course, enrollment, event["lesson_id"])
        payload = {"lesson_id": event["lesson_id"], **self._delta_payload(enrollment, delta)}
        effects = self._reduce(user_id, course_id, EventKind.LESSON_COMPLETED, payload, at)
        if delta.course_completed:
            course_mod.complete_course(course, enrollment, at)
        return delta, effects

    def _apply_attempt(self, event: dict, at: datetime):
        user_id, course_id, quiz_id = event["user_id"], event["course_id"], event["quiz_id"]
        course = self._course(course_id)
        enrollment = self._enrollment(user_id, course_id)
        topic, _lesson, quiz = course.find_quiz(quiz_id)
        self._gate_block(user_id, course_id, topic.topic_id)
        if enrollment.state_of(quiz_id) is NodeState.LOCKED:
            raise AccessError(f"quiz {quiz_id} is locked")
        threshold = self._threshold(course)
        if event.get("instructor_score") is not None:
            result = course_mod.grade_quiz(
                quiz, None, threshold, instructor_score=int(event["instructor_score"])
            )
        else:
            result = course_mod.grade_quiz(quiz, event["answers"], threshold)
        delta = course_mod.record_attempt_and_unlock(course, enrollment, quiz_id, result)
        payload = {
            "quiz_id": quiz_id,
            "points": result.points,
            "passed": result.passed,
            "percentage": result.percentage,
            **self._delta_payload(enrollment, delta),
        }
        effects = self._reduce(user_id, course_id, EventKind.QUIZ_ATTEMPTED, payload, at)
        self.activity_logs[course_id].append(
            telemetry.QuizAttemptRecord(
                user_id=user_id,
                quiz_id=quiz_id,
                score=result.score,
                total=result.total,
                date=at.date(),
                points=result.points,
                points_total=quiz.points_total,
                percentage=result.percentage,
                time_spent_seconds=int(event.get("time_spent_seconds", 0)),
                passed=result.passed,
                course_id=course_id,
            )
        )
        if delta.course_completed:
            course_mod.complete_course(course, enrollment, at)
        return result, delta, effects

    def _apply_evaluation(self, event: dict, at: datetime):
        user_id, course_id = event["user_id"], event["course_id"]
        enrollment = self._enrollment(user_id, course_id)
        if not enrollment.survey_unlocked:
            raise PreconditionError("evaluation opens after course completion")
        if any(r.learner_id == user_id for r in self.evaluations[course_id]):
            raise ConflictError("evaluation already submitted")
        response = telemetry.EvaluationResponse(
            learner_id=user_id,
            core=enrollment.core,
            answers={int(k): int(v) for k, v in event["answers"].items()},
            submitted_at=at,
        )
        self.evaluations[course_id].append(response)
        return response

    # ---- commands ------------------------------------------------------

    def register(
        self,
        user_name: str,
        user_mail: str,
        credential: str,
        role: str = "learner",
        at: datetime | None = None,
        salt: str | None = None,
    ) -> UserAccount:
        if role not in _ROLES:
            raise ValidationError(f"unknown role {role!r}")
        if "@" not in user_mail or user_mail.startswith("@") or user_mail.endswith("@"):
            raise ValidationError("malformed mail address")
        if not user_name.strip():
            raise ValidationError("empty user name")
        if user_name in self._by_name:
            raise ConflictError(f"user name {user_name!r} taken")
        if user_mail in self._by_mail:
            raise ConflictError(f"mail {user_mail!r} taken")
        salt = salt if salt is not None else secrets.token_hex(8)
        return self._commit(
            {
                "kind": "user_registered",
                "at": (at or datetime.now()).isoformat(),
                "user_id": str(self._next_user_number),
                "user_name": user_name,
                "user_mail": user_mail,
                "role": role,
                "salt": salt,
                "credential_hash": _hash_credential(credential, salt),
            }
        )

    def authenticate(self, name_or_mail: str, credential: str) -> UserAccount:
        user_id = self._by_name.get(name_or_mail) or self._by_mail.get(name_or_mail)
        if user_id is None or not self.accounts[user_id].check_credential(credential):
            raise AuthError("unknown user or wrong credential")
        return self.accounts[user_id]

    def enroll(
        self, user_id: str, course_id: str, answers: Mapping[int, str], at: datetime | None = None
    ) -> LearnerEnrollment:
        if user_id not in self.accounts:
            raise NotFoundError(f"unknown user {user_id}")
        self._course(course_id)
        if (user_id, course_id) in self.enrollments:
            raise ConflictError(f"user {user_id} already enrolled in {course_id}")
        return self._commit(
            {
                "kind": "enrolled",
                "at": (at or datetime.now()).isoformat(),
                "user_id": user_id,
                "course_id": course_id,
                "answers": {str(k): v for k, v in answers.items()},
            }
        )

    def view_content(self, user_id: str, course_id: str, node_id: str, at: datetime | None = None):
        return self._commit(
            {
                "kind": "content_viewed",
                "at": (at or datetime.now()).isoformat(),
                "user_id": user_id,
                "course_id": course_id,
                "node_id": node_id,
            }
        )

    def complete_lesson(
        self, user_id: str, course_id: str, lesson_id: str, at: datetime | None = None
    ):
        return self._commit(
            {
                "kind": "lesson_completed",
                "at": (at or datetime.now()).isoformat(),
                "user_id": user_id,
                "course_id": course_id,
                "lesson_id": lesson_id,
            }
        )

    def submit_quiz(
        self,
        user_id: str,
        course_id: str,
        quiz_id: str,
        answers: list | None = None,
        instructor_score: int | None = None,
        time_spent_seconds: int = 0,
        at: datetime | None = None,
    ) -> tuple[AttemptResult, UnlockDelta, list[ElementEffect]]:
        return self._commit(
            {
                "kind": "quiz_attempted",
                "at": (at or datetime.now()).isoformat(),
                "user_id": user_id,
                "course_id": course_id,
                "quiz_id": quiz_id,
                "answers": answers,
                "instructor_score": instructor_score,
                "time_spent_seconds": time_spent_seconds,
            }
        )

    def submit_evaluation(
        self, user_id: str, course_id: str, answers: Mapping[int, int], at: datetime | None = None
    ) -> telemetry.EvaluationResponse:
        return self._commit(
            {
                "kind": "evaluation_submitted",
                "at": (at or datetime.now()).isoformat(),
                "user_id": user_id,
                "course_id": course_id,
                "answers": {str(k): int(v) for k, v in answers.items()},
            }
        )

    # ---- queries -------------------------------------------------------

    def get_state(self, user_id: str, course_id: str) -> dict:
        course = self._course(course_id)
        enrollment = self._enrollment(user_id, course_id)
        key = (user_id, course_id)
        state = self.gam[key]
        progress = runtime.progress_fraction(enrollment.completed_steps, enrollment.total_steps)
        active = self.mapping.entries[enrollment.core]
        economy_active = any(e.element_id == "economy" for e in active)
        gates = {}
        for topic_id, cost in course.economy_gates.items():
            status = runtime.economy_gate_check(state.points_total, cost)
            gates[topic_id] = {
                "cost": cost,
                "open": status.open or not economy_active,
                "deficit": status.deficit if economy_active else 0,
            }
        return {
            "learner_id": user_id,
            "course_id": course_id,
            "core": enrollment.core.value,
            "variants": list(enrollment.variants),
            "active_elements": [e.element_id for e in active],
            "unlock_state": {n: s.value for n, s in enrollment.unlock_state.items()},
            "completed": progress["completed"],
            "total": progress["total"],
            "percent": progress["percent"],
            "points_total": state.points_total,
            "badges": list(state.badges),
            "gates": gates,
            "award": (
                {
                    "badge_id": enrollment.award.badge_id,
                    "certificate_id": enrollment.award.certificate_id,
                }
                if enrollment.award
                else None
            ),
            "survey_unlocked": enrollment.survey_unlocked,
        }

    def leaderboard(self, course_id: str) -> list[runtime.LeaderboardRow]:
        self._course(course_id)
        states = {
            user_id: state
            for (user_id, cid), state in self.gam.items()
            if cid == course_id
        }
        return runtime.leaderboard(states)

    def export_logs(self, course_id: str) -> str:
        self._course(course_id)
        return self.activity_logs[course_id].to_csv()

    def report(self, course_id: str) -> dict:
        self._course(course_id)
        enrollments = [e for (uid, cid), e in self.enrollments.items() if cid == course_id]
        responses = self.evaluations[course_id]
        summary = telemetry.cohort_summary(enrollments, responses)
        return {
            "course_id": course_id,
            "cohort": {
                "n": summary.n,
                "core_counts": {c.value: v for c, v in summary.core_counts.items()},
                "core_percentages": {c.value: v for c, v in summary.core_percentages.items()},
                "completion_count": summary.completion_count,
                "completion_pct": summary.completion_pct,
                "response_count": summary.response_count,
            },
            "evaluation": telemetry.stats_report(responses),
        }
