from datetime import datetime

import pytest

from gamelearn.assessment import CognitiveCore, default_instrument
from gamelearn.catalog import default_catalog, deployed_mapping
from gamelearn.course import CourseGraph, Lesson, Quiz, Topic, default_course
from gamelearn.telemetry import EvaluationResponse, default_questionnaire

T0 = datetime(2022, 3, 1, 9, 0, 0)

ALL_A = {i: "A" for i in range(1, 15)}
ALL_B = {i: "B" for i in range(1, 15)}

# Criterion means reported for the production deployment, keyed by statement.
# Three user-centricity statements share one mean and so on; the per-core
# breakdown fixtures below reproduce the published per-core group means.
PER_CORE_STATEMENT_MEANS = {
    CognitiveCore.NT: {**{i: 4.3 for i in (1, 2, 3, 6, 7, 8)}, 4: 4.4, 5: 4.4, 9: 4.4, 10: 4.4,
                       11: 4.0, 12: 4.0, 13: 4.6, 14: 4.6, 15: 4.8, 16: 4.8, 17: 4.8},
    CognitiveCore.ST: {**{i: 4.4 for i in (1, 2, 3)}, 4: 4.2, 5: 4.2, 6: 3.9, 7: 3.9, 8: 3.9,
                       9: 4.0, 10: 4.0, 11: 3.5, 12: 3.5, 13: 4.5, 14: 4.5, 15: 4.4, 16: 4.4, 17: 4.4},
    CognitiveCore.SF: {**{i: 4.8 for i in (1, 2, 3, 6, 7, 8)}, 4: 4.7, 5: 4.7, 9: 4.6, 10: 4.6,
                       11: 4.1, 12: 4.1, 13: 4.8, 14: 4.8, 15: 5.0, 16: 5.0, 17: 5.0},
    CognitiveCore.NF: {**{i: 4.4 for i in (1, 2, 3)}, 4: 4.3, 5: 4.3, 6: 4.2, 7: 4.2, 8: 4.2,
                       9: 4.2, 10: 4.2, 11: 3.7, 12: 3.7, 13: 4.6, 14: 4.6, 15: 4.8, 16: 4.8, 17: 4.8},
}

# Statement column of the published summary table, statements 1..17.
TABLE_STATEMENT_MEANS = {
    1: 4.6, 2: 4.5, 3: 4.0, 4: 4.5, 5: 4.4, 6: 4.4, 7: 4.3, 8: 4.3, 9: 4.5,
    10: 4.2, 11: 4.6, 12: 3.2, 13: 4.5, 14: 4.9, 15: 4.8, 16: 4.9, 17: 4.8,
}


def synthetic_responses(statement_means, core=CognitiveCore.SF, n=10, prefix="r"):
    """n responses per core whose per-statement means equal the targets
    exactly. Works for any 1-decimal mean with n = 10: a mean of 4.8 becomes
    eight 5s and two 4s."""
    assert n == 10, "exact 1-decimal construction requires 10 responses"
    per_statement = {}
    for sid, mean in statement_means.items():
        tenths = round(mean * 10)
        low, rem = divmod(tenths, 10)
        per_statement[sid] = [low + 1] * rem + [low] * (10 - rem)
    return [
        EvaluationResponse(
            learner_id=f"{prefix}{i}",
            core=core,
            answers={sid: values[i] for sid, values in per_statement.items()},
        )
        for i in range(n)
    ]


@pytest.fixture(scope="session")
def instrument():
    return default_instrument()


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def mapping():
    return deployed_mapping()


@pytest.fixture(scope="session")
def course():
    return default_course()


@pytest.fixture(scope="session")
def questionnaire():
    return default_questionnaire()


def make_toy_course() -> CourseGraph:
    """2 topics x 2 lessons x 1 quiz: small enough for exhaustive
    model-checking of the unlock machine."""

    def quiz(qid):
        return Quiz(quiz_id=qid, title=qid, question_count=1, points_total=10,
                    answer_key=("a",))

    def lesson(lid, qid):
        return Lesson(lesson_id=lid, title=lid, quizzes=(quiz(qid),))

    return CourseGraph(
        course_id="toy",
        title="Toy",
        topics=(
            Topic(topic_id="t1", title="t1",
                  lessons=(lesson("l1", "q1"), lesson("l2", "q2"))),
            Topic(topic_id="t2", title="t2",
                  lessons=(lesson("l3", "q3"), lesson("l4", "q4"))),
        ),
    )


@pytest.fixture
def toy_course():
    return make_toy_course()
