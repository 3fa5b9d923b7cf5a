"""Course structure and the progressive-unlock state machine.

A course is an ordered tree of topics, lessons, and quizzes. Learners enroll
after the cognitive-core assessment; content unlocks strictly forward:
completing a lesson unlocks its quizzes, passing every quiz of a lesson
unlocks the next lesson, finishing a topic's last lesson unlocks the next
topic. Nodes never re-lock.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from fractions import Fraction
from importlib import resources
from typing import Mapping, Sequence

import yaml

from .assessment import AssessmentResponse, CognitiveCore, Instrument, determine_cognitive_core
from .errors import AccessError, PreconditionError, ValidationError
from .rounding import round_half_up


class ActivityKind(str, Enum):
    STANDARD = "standard"
    PUZZLE = "puzzle"
    MATCHING = "matching"
    ESSAY = "essay"


class NodeState(str, Enum):
    LOCKED = "locked"
    UNLOCKED = "unlocked"
    COMPLETED = "completed"


@dataclass(frozen=True)
class Quiz:
    quiz_id: str
    title: str
    question_count: int
    points_total: int
    activity_kind: ActivityKind = ActivityKind.STANDARD
    time_limit_seconds: int | None = None
    # None means instructor-graded (essays and projects)
    answer_key: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.points_total <= 0:
            raise ValidationError(f"quiz {self.quiz_id}: points_total must be positive")
        if self.question_count < 1:
            raise ValidationError(f"quiz {self.quiz_id}: needs at least one question")
        if self.answer_key is not None and len(self.answer_key) != self.question_count:
            raise ValidationError(f"quiz {self.quiz_id}: answer key length mismatch")
        if self.time_limit_seconds is not None and self.time_limit_seconds <= 0:
            raise ValidationError(f"quiz {self.quiz_id}: time limit must be positive")


@dataclass(frozen=True)
class Lesson:
    lesson_id: str
    title: str
    content_refs: tuple[str, ...] = ()
    variants: tuple[str, ...] = ()
    quizzes: tuple[Quiz, ...] = ()


@dataclass(frozen=True)
class Topic:
    topic_id: str
    title: str
    lessons: tuple[Lesson, ...]

    def __post_init__(self):
        if not self.lessons:
            raise ValidationError(f"topic {self.topic_id} has no lessons")


@dataclass(frozen=True)
class CourseGraph:
    course_id: str
    title: str
    topics: tuple[Topic, ...]
    pass_threshold_pct: float = 80.0
    variant_bindings: Mapping[CognitiveCore, tuple[str, ...]] = field(default_factory=dict)
    # topic_id -> point cost charged to Economy-active learners at serving time
    economy_gates: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.topics:
            raise ValidationError("course must contain at least one topic")
        if not (50 < self.pass_threshold_pct <= 100):
            raise ValidationError("pass_threshold_pct must be in (50, 100]")
        seen: set[str] = set()
        for node_id in self.step_ids():
            if node_id in seen:
                raise ValidationError(f"duplicate node id {node_id}")
            seen.add(node_id)

    def step_ids(self) -> list[str]:
        """All progress-counted node ids in canonical order: per topic, each
        lesson followed by its quizzes."""
        out: list[str] = []
        for topic in self.topics:
            for lesson in topic.lessons:
                out.append(lesson.lesson_id)
                out.extend(q.quiz_id for q in lesson.quizzes)
        return out

    @property
    def total_steps(self) -> int:
        return len(self.step_ids())

    def find_quiz(self, quiz_id: str) -> tuple[Topic, Lesson, Quiz]:
        for topic in self.topics:
            for lesson in topic.lessons:
                for quiz in lesson.quizzes:
                    if quiz.quiz_id == quiz_id:
                        return topic, lesson, quiz
        raise ValidationError(f"unknown quiz {quiz_id}")

    def find_lesson(self, lesson_id: str) -> tuple[Topic, Lesson]:
        for topic in self.topics:
            for lesson in topic.lessons:
                if lesson.lesson_id == lesson_id:
                    return topic, lesson
        raise ValidationError(f"unknown lesson {lesson_id}")

    def topic_of(self, node_id: str) -> Topic:
        for topic in self.topics:
            for lesson in topic.lessons:
                if lesson.lesson_id == node_id:
                    return topic
                if any(q.quiz_id == node_id for q in lesson.quizzes):
                    return topic
        raise ValidationError(f"unknown node {node_id}")

    def variants_for(self, core: CognitiveCore) -> tuple[str, ...]:
        return tuple(self.variant_bindings.get(core, ()))


@dataclass(frozen=True)
class AttemptResult:
    score: int
    total: int
    percentage: float
    points: int
    passed: bool


@dataclass(frozen=True)
class CompletionAward:
    badge_id: str
    certificate_id: str
    awarded_at: datetime


@dataclass
class LearnerEnrollment:
    learner_id: str
    course_id: str
    core: CognitiveCore
    enrolled_at: datetime
    unlock_state: dict[str, NodeState]
    total_steps: int
    variants: tuple[str, ...] = ()
    last_accessed: dict[str, datetime] = field(default_factory=dict)
    award: CompletionAward | None = None
    survey_unlocked: bool = False

    @property
    def completed_steps(self) -> int:
        return sum(1 for s in self.unlock_state.values() if s is NodeState.COMPLETED)

    def state_of(self, node_id: str) -> NodeState:
        if node_id not in self.unlock_state:
            raise ValidationError(f"unknown node {node_id}")
        return self.unlock_state[node_id]


@dataclass(frozen=True)
class UnlockDelta:
    """State transitions produced by one completion event."""

    changes: tuple[tuple[str, NodeState], ...] = ()
    topics_completed: tuple[str, ...] = ()
    course_completed: bool = False


def load_course(path=None) -> CourseGraph:
    """Load a course definition; defaults to the shipped six-topic fixture."""
    if path is None:
        text = resources.files("gamelearn.data").joinpath(
            "course_instructional_innovation.yaml"
        ).read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    raw = yaml.safe_load(text)
    topics = tuple(
        Topic(
            topic_id=t["topic_id"],
            title=t["title"],
            lessons=tuple(
                Lesson(
                    lesson_id=l["lesson_id"],
                    title=l["title"],
                    content_refs=tuple(l.get("content_refs", ())),
                    variants=tuple(l.get("variants", ())),
                    quizzes=tuple(
                        Quiz(
                            quiz_id=str(q["quiz_id"]),
                            title=q["title"],
                            question_count=int(q["question_count"]),
                            points_total=int(q["points_total"]),
                            activity_kind=ActivityKind(q.get("activity_kind", "standard")),
                            time_limit_seconds=q.get("time_limit_seconds"),
                            answer_key=(
                                tuple(str(a) for a in q["answer_key"])
                                if "answer_key" in q
                                else None
                            ),
                        )
                        for q in l.get("quizzes", ())
                    ),
                )
                for l in t["lessons"]
            ),
        )
        for t in raw["topics"]
    )
    return CourseGraph(
        course_id=str(raw["course_id"]),
        title=raw["title"],
        topics=topics,
        pass_threshold_pct=float(raw.get("pass_threshold_pct", 80)),
        variant_bindings={
            CognitiveCore(core): tuple(tags)
            for core, tags in raw.get("variant_bindings", {}).items()
        },
        economy_gates=dict(raw.get("economy_gates", {})),
    )


_DEFAULT_COURSE: CourseGraph | None = None


def default_course() -> CourseGraph:
    global _DEFAULT_COURSE
    if _DEFAULT_COURSE is None:
        _DEFAULT_COURSE = load_course()
    return _DEFAULT_COURSE


def enroll(
    learner_id: str,
    course: CourseGraph,
    assessment: AssessmentResponse,
    enrolled_at: datetime,
    instrument: Instrument | None = None,
) -> LearnerEnrollment:
    """Score the assessment, bind the matching content variants, and open the
    first lesson of the first topic. Duplicate-enrollment checks belong to the
    store that owns existing enrollments."""
    core = determine_cognitive_core(assessment, instrument)
    unlock_state = {node_id: NodeState.LOCKED for node_id in course.step_ids()}
    first_lesson = course.topics[0].lessons[0]
    unlock_state[first_lesson.lesson_id] = NodeState.UNLOCKED
    return LearnerEnrollment(
        learner_id=learner_id,
        course_id=course.course_id,
        core=core,
        enrolled_at=enrolled_at,
        unlock_state=unlock_state,
        total_steps=course.total_steps,
        variants=course.variants_for(core),
    )


def grade_quiz(
    quiz: Quiz,
    submitted_answers: Sequence[str | None] | None = None,
    pass_threshold_pct: float = 80.0,
    instructor_score: int | None = None,
) -> AttemptResult:
    """Grade one attempt. Keyed quizzes are scored against the answer key
    (None entries count as unanswered); instructor-graded activities take the
    score directly."""
    if instructor_score is not None:
        score = instructor_score
        if not (0 <= score <= quiz.question_count):
            raise ValidationError("instructor score out of range")
    else:
        if quiz.answer_key is None:
            raise ValidationError(f"quiz {quiz.quiz_id} requires instructor grading")
        if submitted_answers is None or len(submitted_answers) != quiz.question_count:
            got = 0 if submitted_answers is None else len(submitted_answers)
            raise ValidationError(
                f"expected {quiz.question_count} answers for quiz {quiz.quiz_id}, got {got}"
            )
        score = sum(
            1
            for given, key in zip(submitted_answers, quiz.answer_key)
            if given is not None and str(given).strip().lower() == key.lower()
        )
    return grade_from_score(quiz, score, pass_threshold_pct)


def grade_from_score(quiz: Quiz, score: int, pass_threshold_pct: float = 80.0) -> AttemptResult:
    pct = Fraction(100 * score, quiz.question_count)
    points = int(round_half_up(pct / 100 * quiz.points_total))
    return AttemptResult(
        score=score,
        total=quiz.question_count,
        percentage=float(pct),
        points=points,
        passed=pct >= Fraction(pass_threshold_pct).limit_denominator(10**6),
    )


def _advance_after(course: CourseGraph, enrollment: LearnerEnrollment, lesson: Lesson) -> list[tuple[str, NodeState]]:
    """Unlock whatever follows a fully-completed lesson."""
    changes: list[tuple[str, NodeState]] = []
    topic = course.topic_of(lesson.lesson_id)
    lessons = list(topic.lessons)
    idx = lessons.index(lesson)
    if idx + 1 < len(lessons):
        nxt = lessons[idx + 1].lesson_id
    else:
        topics = list(course.topics)
        tidx = topics.index(topic)
        if tidx + 1 < len(topics):
            nxt = topics[tidx + 1].lessons[0].lesson_id
        else:
            return changes
    if enrollment.unlock_state[nxt] is NodeState.LOCKED:
        enrollment.unlock_state[nxt] = NodeState.UNLOCKED
        changes.append((nxt, NodeState.UNLOCKED))
    return changes


def _lesson_done(enrollment: LearnerEnrollment, lesson: Lesson) -> bool:
    if enrollment.unlock_state[lesson.lesson_id] is not NodeState.COMPLETED:
        return False
    return all(
        enrollment.unlock_state[q.quiz_id] is NodeState.COMPLETED for q in lesson.quizzes
    )


def _topic_done(enrollment: LearnerEnrollment, topic: Topic) -> bool:
    return all(_lesson_done(enrollment, lesson) for lesson in topic.lessons)


def complete_lesson(
    course: CourseGraph, enrollment: LearnerEnrollment, lesson_id: str
) -> UnlockDelta:
    """Mark a lesson viewed-through. Unlocks its quizzes, or advances straight
    to the next lesson when it has none."""
    topic, lesson = course.find_lesson(lesson_id)
    state = enrollment.state_of(lesson_id)
    if state is NodeState.LOCKED:
        raise AccessError(f"lesson {lesson_id} is locked")
    if state is NodeState.COMPLETED:
        return UnlockDelta()
    enrollment.unlock_state[lesson_id] = NodeState.COMPLETED
    changes: list[tuple[str, NodeState]] = [(lesson_id, NodeState.COMPLETED)]
    for quiz in lesson.quizzes:
        if enrollment.unlock_state[quiz.quiz_id] is NodeState.LOCKED:
            enrollment.unlock_state[quiz.quiz_id] = NodeState.UNLOCKED
            changes.append((quiz.quiz_id, NodeState.UNLOCKED))
    topics_completed: list[str] = []
    if _lesson_done(enrollment, lesson):
        changes.extend(_advance_after(course, enrollment, lesson))
        if _topic_done(enrollment, topic):
            topics_completed.append(topic.topic_id)
    return UnlockDelta(
        changes=tuple(changes),
        topics_completed=tuple(topics_completed),
        course_completed=all(_topic_done(enrollment, t) for t in course.topics),
    )


def record_attempt_and_unlock(
    course: CourseGraph,
    enrollment: LearnerEnrollment,
    quiz_id: str,
    result: AttemptResult,
) -> UnlockDelta:
    """Apply a graded attempt to the unlock machine. Failures leave state
    untouched (the quiz stays retakeable); a pass completes the quiz and may
    cascade into lesson, topic, and course completion."""
    topic, lesson, _quiz = course.find_quiz(quiz_id)
    state = enrollment.state_of(quiz_id)
    if state is NodeState.LOCKED:
        raise AccessError(f"quiz {quiz_id} is locked")
    if not result.passed or state is NodeState.COMPLETED:
        return UnlockDelta()
    enrollment.unlock_state[quiz_id] = NodeState.COMPLETED
    changes: list[tuple[str, NodeState]] = [(quiz_id, NodeState.COMPLETED)]
    topics_completed: list[str] = []
    if _lesson_done(enrollment, lesson):
        changes.extend(_advance_after(course, enrollment, lesson))
        if _topic_done(enrollment, topic):
            topics_completed.append(topic.topic_id)
    return UnlockDelta(
        changes=tuple(changes),
        topics_completed=tuple(topics_completed),
        course_completed=all(_topic_done(enrollment, t) for t in course.topics),
    )


def revisit(enrollment: LearnerEnrollment, node_id: str, at: datetime) -> str:
    """Read access to any already-unlocked node; never mutates unlock state."""
    state = enrollment.state_of(node_id)
    if state is NodeState.LOCKED:
        raise AccessError(f"node {node_id} is locked")
    enrollment.last_accessed[node_id] = at
    return node_id


def complete_course(
    course: CourseGraph,
    enrollment: LearnerEnrollment,
    at: datetime,
    badge_id: str = "course_complete",
    certificate_id: str = "completion_certificate",
) -> CompletionAward:
    """Issue the completion award once all steps are done. Idempotent: repeat
    calls return the original award."""
    if enrollment.award is not None:
        return enrollment.award
    if enrollment.completed_steps != enrollment.total_steps:
        raise PreconditionError(
            f"{enrollment.completed_steps} of {enrollment.total_steps} steps complete"
        )
    enrollment.award = CompletionAward(
        badge_id=badge_id, certificate_id=certificate_id, awarded_at=at
    )
    enrollment.survey_unlocked = True
    return enrollment.award
