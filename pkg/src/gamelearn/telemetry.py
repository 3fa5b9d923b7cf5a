"""Activity-log persistence and end-of-course evaluation statistics.

The activity log is append-only and exports as CSV in a fixed column order.
The evaluation questionnaire is 17 Likert statements (1 to 5) grouped into
seven criteria; four criteria roll up into an engagement score and three into
an educational-usability score.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from datetime import date, datetime
from enum import Enum
from fractions import Fraction
from importlib import resources
from typing import Iterable, Mapping, Sequence

import yaml

from .assessment import CognitiveCore
from .errors import ValidationError
from .rounding import mean_fraction, round_half_up

CSV_COLUMNS = (
    "user_id",
    "quiz_id",
    "score",
    "total",
    "date",
    "points",
    "points_total",
    "percentage",
    "time_spent",
    "passed",
    "course_id",
)

DATE_FORMAT = "%d-%m-%y"


class Criterion(str, Enum):
    USER_CENTRICITY = "user_centricity"
    EMOTION = "emotion"
    APPEAL = "appeal"
    SATISFACTION = "satisfaction"
    CLARITY = "clarity"
    ERROR_RECOGNITION = "error_recognition"
    FEEDBACK = "feedback"


ENGAGEMENT_CRITERIA = (
    Criterion.USER_CENTRICITY,
    Criterion.EMOTION,
    Criterion.APPEAL,
    Criterion.SATISFACTION,
)
USABILITY_CRITERIA = (
    Criterion.CLARITY,
    Criterion.ERROR_RECOGNITION,
    Criterion.FEEDBACK,
)
CRITERION_GROUPS = {
    "engagement": ENGAGEMENT_CRITERIA,
    "educational_usability": USABILITY_CRITERIA,
}


def format_time_spent(seconds: int) -> str:
    """Minutes-and-seconds wire form: 83 -> '1m 23s', 41 -> '41s'."""
    if seconds < 0:
        raise ValidationError("time_spent must be non-negative")
    minutes, secs = divmod(int(seconds), 60)
    if minutes:
        return f"{minutes}m {secs}s"
    return f"{secs}s"


def parse_time_spent(text: str) -> int:
    parts = text.strip().split()
    seconds = 0
    try:
        for part in parts:
            if part.endswith("m"):
                seconds += int(part[:-1]) * 60
            elif part.endswith("s"):
                seconds += int(part[:-1])
            else:
                raise ValueError(part)
    except ValueError:
        raise ValidationError(f"unparseable time_spent {text!r}") from None
    if not parts:
        raise ValidationError("empty time_spent")
    return seconds


@dataclass(frozen=True)
class QuizAttemptRecord:
    user_id: str
    quiz_id: str
    score: int
    total: int
    date: date
    points: int
    points_total: int
    percentage: float
    time_spent_seconds: int
    passed: bool
    course_id: str

    def __post_init__(self):
        if self.total < 1:
            raise ValidationError("total: must be at least 1")
        if not (0 <= self.score <= self.total):
            raise ValidationError("score: must be between 0 and total")
        if self.points_total <= 0:
            raise ValidationError("points_total: must be positive")
        if not (0 <= self.points <= self.points_total):
            raise ValidationError("points: must be between 0 and points_total")
        if self.time_spent_seconds < 0:
            raise ValidationError("time_spent: must be non-negative")
        exact = Fraction(100 * self.score, self.total)
        if abs(Fraction(str(self.percentage)) - exact) >= Fraction(1, 2):
            raise ValidationError(
                f"percentage: {self.percentage} inconsistent with {self.score}/{self.total}"
            )

    def to_row(self) -> list[str]:
        pct = self.percentage
        pct_text = str(int(pct)) if float(pct) == int(pct) else str(pct)
        return [
            self.user_id,
            self.quiz_id,
            str(self.score),
            str(self.total),
            self.date.strftime(DATE_FORMAT),
            str(self.points),
            str(self.points_total),
            pct_text,
            format_time_spent(self.time_spent_seconds),
            "YES" if self.passed else "NO",
            self.course_id,
        ]

    @classmethod
    def from_row(cls, row: Mapping[str, str]) -> "QuizAttemptRecord":
        return cls(
            user_id=row["user_id"],
            quiz_id=row["quiz_id"],
            score=int(row["score"]),
            total=int(row["total"]),
            date=datetime.strptime(row["date"], DATE_FORMAT).date(),
            points=int(row["points"]),
            points_total=int(row["points_total"]),
            percentage=float(row["percentage"]),
            time_spent_seconds=parse_time_spent(row["time_spent"]),
            passed=row["passed"].strip().upper() == "YES",
            course_id=row["course_id"],
        )


class ActivityLog:
    """Append-only attempt log. Rows are never mutated or removed; duplicates
    are legitimate (retakes can produce identical rows)."""

    def __init__(self, records: Iterable[QuizAttemptRecord] = ()):
        self._records: list[QuizAttemptRecord] = list(records)

    def append(self, record: QuizAttemptRecord) -> None:
        self._records.append(record)

    @property
    def records(self) -> tuple[QuizAttemptRecord, ...]:
        return tuple(self._records)

    def __len__(self) -> int:
        return len(self._records)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for record in self._records:
            writer.writerow(record.to_row())
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ActivityLog":
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
            raise ValidationError(f"unexpected log columns {reader.fieldnames}")
        return cls(QuizAttemptRecord.from_row(row) for row in reader)


def load_fixture_log() -> ActivityLog:
    """The shipped 28-row production log sample."""
    text = resources.files("gamelearn.data").joinpath("system_log_fixture.csv").read_text()
    return ActivityLog.from_csv(text)


@dataclass(frozen=True)
class Statement:
    statement_id: int
    criterion: Criterion
    text: str


def load_questionnaire(path=None) -> tuple[Statement, ...]:
    if path is None:
        text = resources.files("gamelearn.data").joinpath(
            "evaluation_questionnaire.yaml"
        ).read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    raw = yaml.safe_load(text)
    statements = tuple(
        Statement(
            statement_id=int(s["statement_id"]),
            criterion=Criterion(s["criterion"]),
            text=s["text"],
        )
        for s in raw["statements"]
    )
    ids = [s.statement_id for s in statements]
    if sorted(ids) != list(range(1, len(statements) + 1)):
        raise ValidationError("statement ids must be 1..n without gaps")
    return statements


_DEFAULT_QUESTIONNAIRE: tuple[Statement, ...] | None = None


def default_questionnaire() -> tuple[Statement, ...]:
    global _DEFAULT_QUESTIONNAIRE
    if _DEFAULT_QUESTIONNAIRE is None:
        _DEFAULT_QUESTIONNAIRE = load_questionnaire()
    return _DEFAULT_QUESTIONNAIRE


@dataclass(frozen=True)
class EvaluationResponse:
    learner_id: str
    core: CognitiveCore
    answers: Mapping[int, int]  # statement_id -> 1..5
    submitted_at: datetime | None = None

    def __post_init__(self):
        n = len(default_questionnaire())
        if set(self.answers.keys()) != set(range(1, n + 1)):
            raise ValidationError(f"evaluation requires answers to all {n} statements")
        for sid, value in self.answers.items():
            if not (1 <= int(value) <= 5):
                raise ValidationError(f"statement {sid}: answer must be in [1, 5]")


def classify(mean: float) -> str:
    """negative on [1, 2.6), neutral on [2.6, 3.4), positive on [3.4, 5]."""
    if not (1 <= mean <= 5):
        raise ValidationError(f"mean {mean} outside [1, 5]")
    if mean < 2.6:
        return "negative"
    if mean < 3.4:
        return "neutral"
    return "positive"


@dataclass(frozen=True)
class CriterionStats:
    criterion: Criterion
    statement_ids: tuple[int, ...]
    mean: float
    sd: float
    min: int
    max: int
    classification: str


def _scores_for(
    responses: Sequence[EvaluationResponse], statement_ids: Iterable[int]
) -> list[int]:
    ids = list(statement_ids)
    return [int(r.answers[sid]) for r in responses for sid in ids]


def criterion_stats(
    responses: Sequence[EvaluationResponse],
    criterion: Criterion,
    statements: Sequence[Statement] | None = None,
) -> CriterionStats:
    """Pool every (response, statement-in-criterion) score; mean and
    population sd are rounded half-up to one decimal."""
    if not responses:
        raise ValidationError("no responses to aggregate")
    statements = statements or default_questionnaire()
    ids = tuple(s.statement_id for s in statements if s.criterion is criterion)
    scores = _scores_for(responses, ids)
    mean_exact = mean_fraction(scores)
    variance = mean_fraction([(Fraction(s) - mean_exact) ** 2 for s in scores])
    mean = round_half_up(mean_exact, 1)
    return CriterionStats(
        criterion=criterion,
        statement_ids=ids,
        mean=mean,
        sd=round_half_up(math.sqrt(variance), 1),
        min=min(scores),
        max=max(scores),
        classification=classify(mean),
    )


def statement_mean(responses: Sequence[EvaluationResponse], statement_id: int) -> float:
    if not responses:
        raise ValidationError("no responses to aggregate")
    return round_half_up(mean_fraction(_scores_for(responses, [statement_id])), 1)


def per_core_breakdown(
    responses: Sequence[EvaluationResponse],
    criterion_group: str,
    statements: Sequence[Statement] | None = None,
) -> dict[CognitiveCore, float]:
    """Group mean per core. Cores with zero responses are omitted."""
    if criterion_group not in CRITERION_GROUPS:
        raise ValidationError(f"unknown criterion group {criterion_group!r}")
    statements = statements or default_questionnaire()
    criteria = CRITERION_GROUPS[criterion_group]
    ids = [s.statement_id for s in statements if s.criterion in criteria]
    out: dict[CognitiveCore, float] = {}
    for core in CognitiveCore:
        subset = [r for r in responses if r.core is core]
        if not subset:
            continue
        out[core] = round_half_up(mean_fraction(_scores_for(subset, ids)), 1)
    return out


def overall_rollup(
    responses: Sequence[EvaluationResponse],
    statements: Sequence[Statement] | None = None,
) -> dict[str, float]:
    """Engagement = mean of its four criterion means; educational usability =
    mean of its three."""
    statements = statements or default_questionnaire()
    out: dict[str, float] = {}
    for group, criteria in CRITERION_GROUPS.items():
        means = [
            Fraction(str(criterion_stats(responses, c, statements).mean)) for c in criteria
        ]
        out[group] = round_half_up(mean_fraction(means), 1)
    return out


def largest_remainder_percentages(counts: Mapping[str, int]) -> dict[str, float]:
    """One-decimal percentages that sum to exactly 100.0, leftovers assigned
    by largest fractional remainder."""
    n = sum(counts.values())
    if n == 0:
        return {k: 0.0 for k in counts}
    units: dict[str, int] = {}  # tenths of a percent
    remainders: dict[str, Fraction] = {}
    for key, count in counts.items():
        share = Fraction(1000 * count, n)
        units[key] = int(share)  # floor
        remainders[key] = share - int(share)
    leftover = 1000 - sum(units.values())
    for key in sorted(counts, key=lambda k: (-remainders[k], -counts[k], k))[:leftover]:
        units[key] += 1
    return {k: units[k] / 10 for k in counts}


@dataclass(frozen=True)
class CohortSummary:
    n: int
    core_counts: Mapping[CognitiveCore, int]
    core_percentages: Mapping[CognitiveCore, float]
    completion_count: int
    completion_pct: float
    response_count: int
    gender_counts: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if sum(self.core_counts.values()) != self.n:
            raise ValidationError("core counts must sum to n")


def cohort_summary(enrollments, responses: Sequence[EvaluationResponse]) -> CohortSummary:
    """Counts plus one-decimal percentages. Each enrollment needs a `core`
    and completion is judged by its step counter."""
    enrollments = list(enrollments)
    core_counts = {core: 0 for core in CognitiveCore}
    completion_count = 0
    for e in enrollments:
        core_counts[e.core] += 1
        if e.total_steps and e.completed_steps == e.total_steps:
            completion_count += 1
    n = len(enrollments)
    pct_by_value = largest_remainder_percentages(
        {core.value: count for core, count in core_counts.items()}
    )
    completion_pct = (
        round_half_up(Fraction(100 * completion_count, n), 1) if n else 0.0
    )
    return CohortSummary(
        n=n,
        core_counts=core_counts,
        core_percentages={core: pct_by_value[core.value] for core in CognitiveCore},
        completion_count=completion_count,
        completion_pct=completion_pct,
        response_count=len(responses),
    )


def stats_report(
    responses: Sequence[EvaluationResponse],
    statements: Sequence[Statement] | None = None,
) -> dict:
    """Structured evaluation report: per-statement and per-criterion stats,
    group rollups, and per-core breakdowns."""
    statements = statements or default_questionnaire()
    if not responses:
        return {"response_count": 0, "criteria": [], "rollups": {}, "per_core": {}}
    criteria = []
    for criterion in Criterion:
        stats = criterion_stats(responses, criterion, statements)
        criteria.append(
            {
                "criterion": criterion.value,
                "statements": [
                    {
                        "statement_id": s.statement_id,
                        "text": s.text,
                        "mean": statement_mean(responses, s.statement_id),
                    }
                    for s in statements
                    if s.criterion is criterion
                ],
                "mean": stats.mean,
                "sd": stats.sd,
                "min": stats.min,
                "max": stats.max,
                "classification": stats.classification,
            }
        )
    return {
        "response_count": len(responses),
        "criteria": criteria,
        "rollups": overall_rollup(responses, statements),
        "per_core": {
            group: {
                core.value: value
                for core, value in per_core_breakdown(responses, group, statements).items()
            }
            for group in CRITERION_GROUPS
        },
    }
