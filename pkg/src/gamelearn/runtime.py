"""Event-driven gamification reducer.

`reduce` is a pure function from (activity event, active element tuple,
state) to an effect list plus the next state. Points, progress, and
completion are always computed because telemetry needs them; an effect is
*surfaced* to the learner only when its element is in the active tuple (or it
carries no element at all, the baseline mechanics).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta
from enum import Enum
from fractions import Fraction
from importlib import resources
from typing import Any, Mapping, Sequence

import yaml

from .catalog import ElementCatalog, GameElement, default_catalog
from .course import AttemptResult, Quiz, grade_quiz
from .errors import ConfigurationError, ValidationError
from .rounding import round_half_up_int


class EventKind(str, Enum):
    ENROLLED = "enrolled"
    LESSON_COMPLETED = "lesson_completed"
    QUIZ_ATTEMPTED = "quiz_attempted"
    TOPIC_COMPLETED = "topic_completed"
    COURSE_COMPLETED = "course_completed"
    CONTENT_VIEWED = "content_viewed"


class EffectKind(str, Enum):
    POINTS_AWARDED = "points_awarded"
    BADGE_GRANTED = "badge_granted"
    PROGRESS_UPDATED = "progress_updated"
    LEADERBOARD_UPDATED = "leaderboard_updated"
    GATE_OPENED = "gate_opened"
    TIMER_STARTED = "timer_started"
    NOTIFICATION_QUEUED = "notification_queued"
    VARIANT_SERVED = "variant_served"


@dataclass(frozen=True)
class ActivityEvent:
    event_id: str
    learner_id: str
    course_id: str
    kind: EventKind
    payload: Mapping[str, Any]
    occurred_at: datetime


@dataclass(frozen=True)
class ElementEffect:
    effect_kind: EffectKind
    details: Mapping[str, Any]
    caused_by: str
    # None marks a baseline mechanic shown to every learner
    element: GameElement | None = None
    surfaced: bool = True


@dataclass(frozen=True)
class LeaderboardRow:
    learner_id: str
    points_total: int
    rank: int
    tie_key: datetime


@dataclass(frozen=True)
class GamificationState:
    learner_id: str
    course_id: str
    total_steps: int = 0
    completed_steps: int = 0
    # quiz_id -> best points across attempts; retakes never double-award
    best_points: Mapping[str, int] = field(default_factory=dict)
    badges: tuple[str, ...] = ()
    tie_key: datetime | None = None  # when the current points total was first reached
    gates: Mapping[str, int] = field(default_factory=dict)
    open_gates: frozenset[str] = frozenset()

    @property
    def points_total(self) -> int:
        return sum(self.best_points.values())


def _has(active: Sequence[GameElement], element_id: str) -> bool:
    return any(e.element_id == element_id for e in active)


def _find(active: Sequence[GameElement], element_id: str) -> GameElement | None:
    for e in active:
        if e.element_id == element_id:
            return e
    return None


# elements realized as content-variant selectors rather than numeric effects
_VARIANT_SELECTORS = ("sensation", "choice", "puzzle", "stats")


def reduce(
    event: ActivityEvent,
    active: Sequence[GameElement],
    state: GamificationState,
    catalog: ElementCatalog | None = None,
) -> tuple[list[ElementEffect], GamificationState]:
    """Apply one event. Effects are ordered by their dependencies: points
    before the leaderboard they feed, completion before the progress bar."""
    catalog = catalog or default_catalog()
    if not isinstance(event.kind, EventKind):
        raise ValidationError(f"unknown event kind {event.kind!r}")
    payload = event.payload
    eid = event.event_id

    points_fx: list[ElementEffect] = []
    badge_fx: list[ElementEffect] = []
    progress_fx: list[ElementEffect] = []
    board_fx: list[ElementEffect] = []
    gate_fx: list[ElementEffect] = []
    timer_fx: list[ElementEffect] = []
    note_fx: list[ElementEffect] = []
    variant_fx: list[ElementEffect] = []

    new = state

    def progress_effect(st: GamificationState) -> ElementEffect:
        prog = catalog.get("progression")
        frac = progress_fraction(st.completed_steps, st.total_steps)
        return ElementEffect(
            effect_kind=EffectKind.PROGRESS_UPDATED,
            details=frac,
            caused_by=eid,
            element=prog,
            surfaced=_has(active, "progression"),
        )

    def grant_badge(st: GamificationState, badge_key: str, element_id: str | None) -> GamificationState:
        if badge_key in st.badges:
            return st
        element = _find(active, element_id) if element_id else None
        if element is None and element_id is not None:
            element = catalog.get(element_id)
        badge_fx.append(
            ElementEffect(
                effect_kind=EffectKind.BADGE_GRANTED,
                details={"badge": badge_key},
                caused_by=eid,
                element=element if element_id else None,
                surfaced=element_id is None or _has(active, element_id),
            )
        )
        return replace(st, badges=st.badges + (badge_key,))

    if event.kind is EventKind.ENROLLED:
        new = replace(
            new,
            total_steps=int(payload.get("total_steps", 0)),
            gates=dict(payload.get("gates", {})) if _has(active, "economy") else {},
        )
        progress_fx.append(progress_effect(new))
        for selector in _VARIANT_SELECTORS:
            element = _find(active, selector)
            if element is not None:
                variant_fx.append(
                    ElementEffect(
                        effect_kind=EffectKind.VARIANT_SERVED,
                        details={"selector": selector, "variants": list(payload.get("variants", []))},
                        caused_by=eid,
                        element=element,
                        surfaced=True,
                    )
                )
        # zero-cost gates are open from the start
        for topic, cost in new.gates.items():
            if cost <= 0:
                new = replace(new, open_gates=new.open_gates | {topic})

    elif event.kind is EventKind.QUIZ_ATTEMPTED:
        quiz_id = str(payload["quiz_id"])
        points = int(payload.get("points", 0))
        passed = bool(payload.get("passed", False))
        old_total = new.points_total
        best = dict(new.best_points)
        if points > best.get(quiz_id, 0):
            best[quiz_id] = points
        new = replace(new, best_points=best)
        delta = new.points_total - old_total
        if delta > 0:
            new = replace(new, tie_key=event.occurred_at)
            points_fx.append(
                ElementEffect(
                    effect_kind=EffectKind.POINTS_AWARDED,
                    details={"quiz_id": quiz_id, "points": delta, "points_total": new.points_total},
                    caused_by=eid,
                    element=None,
                    surfaced=True,
                )
            )
            board_fx.append(
                ElementEffect(
                    effect_kind=EffectKind.LEADERBOARD_UPDATED,
                    details={"points_total": new.points_total},
                    caused_by=eid,
                    element=catalog.get("competition"),
                    surfaced=_has(active, "competition"),
                )
            )
            for topic, cost in new.gates.items():
                if topic not in new.open_gates and new.points_total >= cost:
                    new = replace(new, open_gates=new.open_gates | {topic})
                    gate_fx.append(
                        ElementEffect(
                            effect_kind=EffectKind.GATE_OPENED,
                            details={"topic_id": topic, "cost": cost},
                            caused_by=eid,
                            element=catalog.get("economy"),
                            surfaced=_has(active, "economy"),
                        )
                    )
        if "steps_completed" in payload:
            new = replace(new, completed_steps=int(payload["steps_completed"]))
        for topic_id in payload.get("topics_completed", ()):
            new = grant_badge(new, f"topic_complete:{topic_id}", "acknowledgement")
        if payload.get("course_completed"):
            new = grant_badge(new, "course_complete", None)
        if passed:
            progress_fx.append(progress_effect(new))
            note_fx.append(
                ElementEffect(
                    effect_kind=EffectKind.NOTIFICATION_QUEUED,
                    details={"reason": "quiz_passed", "quiz_id": quiz_id},
                    caused_by=eid,
                )
            )
        else:
            note_fx.append(
                ElementEffect(
                    effect_kind=EffectKind.NOTIFICATION_QUEUED,
                    details={"reason": "retake_available", "quiz_id": quiz_id},
                    caused_by=eid,
                )
            )

    elif event.kind is EventKind.LESSON_COMPLETED:
        if "steps_completed" in payload:
            new = replace(new, completed_steps=int(payload["steps_completed"]))
        for topic_id in payload.get("topics_completed", ()):
            new = grant_badge(new, f"topic_complete:{topic_id}", "acknowledgement")
        if payload.get("course_completed"):
            new = grant_badge(new, "course_complete", None)
        progress_fx.append(progress_effect(new))

    elif event.kind is EventKind.TOPIC_COMPLETED:
        new = grant_badge(new, f"topic_complete:{payload['topic_id']}", "acknowledgement")
        if badge_fx:
            note_fx.append(
                ElementEffect(
                    effect_kind=EffectKind.NOTIFICATION_QUEUED,
                    details={"reason": "topic_completed", "topic_id": payload["topic_id"]},
                    caused_by=eid,
                )
            )

    elif event.kind is EventKind.COURSE_COMPLETED:
        new = grant_badge(new, "course_complete", None)
        if badge_fx:
            note_fx.append(
                ElementEffect(
                    effect_kind=EffectKind.NOTIFICATION_QUEUED,
                    details={"reason": "course_completed"},
                    caused_by=eid,
                )
            )

    elif event.kind is EventKind.CONTENT_VIEWED:
        limit = payload.get("time_limit_seconds")
        if limit and _has(active, "time_pressure"):
            timer_fx.append(
                ElementEffect(
                    effect_kind=EffectKind.TIMER_STARTED,
                    details={"quiz_id": payload.get("quiz_id"), "time_limit_seconds": int(limit)},
                    caused_by=eid,
                    element=catalog.get("time_pressure"),
                    surfaced=True,
                )
            )

    effects = points_fx + badge_fx + progress_fx + board_fx + gate_fx + timer_fx + variant_fx + note_fx
    return effects, new


def progress_fraction(completed: int, total: int) -> dict[str, int]:
    if total <= 0:
        return {"completed": 0, "total": 0, "percent": 0}
    return {
        "completed": completed,
        "total": total,
        "percent": round_half_up_int(Fraction(100 * completed, total)),
    }


@dataclass(frozen=True)
class GateStatus:
    open: bool
    deficit: int = 0


def economy_gate_check(learner_points: int, gate_cost: int) -> GateStatus:
    """Open iff points cover the cost; Closed carries the shortfall."""
    if gate_cost < 0:
        raise ValidationError("gate cost must be non-negative")
    if learner_points >= gate_cost:
        return GateStatus(open=True)
    return GateStatus(open=False, deficit=gate_cost - learner_points)


def leaderboard(states: Mapping[str, GamificationState]) -> list[LeaderboardRow]:
    """Rank every learner with points: points descending, earlier achiever
    first on ties, ranks dense from 1."""
    entries = [
        (s.points_total, s.tie_key, learner_id)
        for learner_id, s in states.items()
        if s.tie_key is not None
    ]
    entries.sort(key=lambda e: (-e[0], e[1], e[2]))
    return [
        LeaderboardRow(learner_id=learner_id, points_total=points, rank=i + 1, tie_key=tie)
        for i, (points, tie, learner_id) in enumerate(entries)
    ]


@dataclass(frozen=True)
class TimerHandle:
    quiz_id: str
    started_at: datetime
    deadline: datetime


def start_timer(quiz: Quiz, now: datetime) -> TimerHandle:
    if quiz.time_limit_seconds is None:
        raise ConfigurationError(f"quiz {quiz.quiz_id} has no time limit")
    return TimerHandle(
        quiz_id=quiz.quiz_id,
        started_at=now,
        deadline=now + timedelta(seconds=quiz.time_limit_seconds),
    )


def expire_timer(
    handle: TimerHandle,
    quiz: Quiz,
    answers_so_far: Sequence[str | None],
    pass_threshold_pct: float = 80.0,
) -> AttemptResult:
    """Auto-submit whatever is answered; the unanswered remainder scores 0."""
    if handle.quiz_id != quiz.quiz_id:
        raise ValidationError("timer handle does not match quiz")
    padded = list(answers_so_far)[: quiz.question_count]
    padded += [None] * (quiz.question_count - len(padded))
    return grade_quiz(quiz, padded, pass_threshold_pct)


@dataclass(frozen=True)
class FeedbackRecord:
    channel: str
    effect_kind: EffectKind
    body: Mapping[str, Any]


def load_channel_routing(path=None) -> dict[str, list[str]]:
    if path is None:
        text = resources.files("gamelearn.data").joinpath("channel_routing.yaml").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return {k: list(v) for k, v in yaml.safe_load(text)["routes"].items()}


_DEFAULT_ROUTING: dict[str, list[str]] | None = None


def default_routing() -> dict[str, list[str]]:
    global _DEFAULT_ROUTING
    if _DEFAULT_ROUTING is None:
        _DEFAULT_ROUTING = load_channel_routing()
    return _DEFAULT_ROUTING


def queue_feedback(
    effect: ElementEffect, routing: Mapping[str, Sequence[str]] | None = None
) -> list[FeedbackRecord]:
    """One record per configured channel for a surfaced effect."""
    if not effect.surfaced:
        return []
    routing = routing if routing is not None else default_routing()
    channels = routing.get(effect.effect_kind.value, [])
    return [
        FeedbackRecord(channel=channel, effect_kind=effect.effect_kind, body=dict(effect.details))
        for channel in channels
    ]


class NullEmailTransport:
    """Records would-be emails; never touches the network."""

    def __init__(self):
        self.sent: list[FeedbackRecord] = []

    def send(self, record: FeedbackRecord) -> None:
        self.sent.append(record)
