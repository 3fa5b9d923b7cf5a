"""Personalized gamification engine for e-learning.

Learners take a short forced-choice assessment that resolves to one of four
cognitive cores (ST, SF, NT, NF); each core activates a tuple of game
elements that shapes how the course is served: timers, leaderboards, economy
gates, badges, progress bars, and content variants. Telemetry and an
end-of-course survey feed the evaluation statistics.
"""

from .assessment import (
    AssessmentResponse,
    CognitiveCore,
    Dichotomy,
    determine_cognitive_core,
    load_instrument,
    score_dichotomy,
)
from .catalog import (
    Dimension,
    ElementCatalog,
    ElementMapping,
    GameElement,
    active_elements,
    default_catalog,
    deployed_mapping,
    derive_mapping,
    dimension_winner,
    load_derivation_config,
    load_tallies,
)
from .course import (
    AttemptResult,
    CourseGraph,
    LearnerEnrollment,
    NodeState,
    complete_course,
    complete_lesson,
    enroll,
    grade_quiz,
    load_course,
    record_attempt_and_unlock,
    revisit,
)
from .errors import GamelearnError
from .rounding import round_half_up, round_half_up_int
from .runtime import (
    ActivityEvent,
    EffectKind,
    ElementEffect,
    EventKind,
    GamificationState,
    economy_gate_check,
    leaderboard,
    progress_fraction,
    queue_feedback,
    reduce,
    start_timer,
)
from .simulator import CohortConfig, load_cohort_config, run_cohort
from .store import AppCore
from .telemetry import (
    ActivityLog,
    Criterion,
    EvaluationResponse,
    QuizAttemptRecord,
    classify,
    cohort_summary,
    criterion_stats,
    per_core_breakdown,
)

__version__ = "1.0.0"

__all__ = [
    "ActivityEvent",
    "ActivityLog",
    "AppCore",
    "AssessmentResponse",
    "AttemptResult",
    "CognitiveCore",
    "CohortConfig",
    "CourseGraph",
    "Criterion",
    "Dichotomy",
    "Dimension",
    "EffectKind",
    "ElementCatalog",
    "ElementEffect",
    "ElementMapping",
    "EvaluationResponse",
    "EventKind",
    "GameElement",
    "GamelearnError",
    "GamificationState",
    "LearnerEnrollment",
    "NodeState",
    "QuizAttemptRecord",
    "active_elements",
    "classify",
    "cohort_summary",
    "complete_course",
    "complete_lesson",
    "criterion_stats",
    "default_catalog",
    "deployed_mapping",
    "derive_mapping",
    "determine_cognitive_core",
    "dimension_winner",
    "economy_gate_check",
    "enroll",
    "grade_quiz",
    "leaderboard",
    "load_cohort_config",
    "load_course",
    "load_derivation_config",
    "load_instrument",
    "load_tallies",
    "per_core_breakdown",
    "progress_fraction",
    "queue_feedback",
    "record_attempt_and_unlock",
    "reduce",
    "revisit",
    "round_half_up",
    "round_half_up_int",
    "run_cohort",
    "score_dichotomy",
    "start_timer",
]
