"""
Drip-unlock walkthrough
=======================

One learner works through the six-topic fixture course. Content unlocks
strictly forward: finishing a lesson opens its quizzes, passing all of a
lesson's quizzes opens the next lesson, and the last lesson of a topic
opens the next topic. Along the way the gamification reducer awards
points, badges, and progress updates filtered by the learner's element
tuple.
"""

from datetime import datetime, timedelta

from gamelearn import AppCore

clock = datetime(2022, 3, 1, 9, 0)
app = AppCore()
course = app.courses["31285"]

user = app.register("walkthrough", "walk@example.edu", "pw", at=clock).user_id
app.enroll(user, "31285", {i: "B" for i in range(1, 15)}, at=clock)  # scores as NT
state = app.get_state(user, "31285")
print(f"enrolled as {state['core']}; active elements: {', '.join(state['active_elements'])}")
print(f"progress: {state['completed']}/{state['total']} steps ({state['percent']}%)")

# complete the first two lessons
for lesson_id in ("course_introduction", "mindset_and_perspectives"):
    clock += timedelta(minutes=20)
    app.complete_lesson(user, "31285", lesson_id, at=clock)
state = app.get_state(user, "31285")
print(f"\nafter two lessons: {state['completed']}/{state['total']} ({state['percent']}%)")

# finish the lesson that owns the first quizzes, then fail and retake
clock += timedelta(minutes=20)
app.complete_lesson(user, "31285", "reframing_conversations", at=clock)

clock += timedelta(minutes=2)
result, _, _ = app.submit_quiz(user, "31285", "30381", answers=["x"],
                               time_spent_seconds=45, at=clock)
print(f"\nfirst attempt: {result.score}/{result.total} = {result.percentage:.0f}% "
      f"-> passed={result.passed} (quiz stays retakeable)")

clock += timedelta(minutes=3)
result, delta, effects = app.submit_quiz(user, "31285", "30381", answers=["a"],
                                         time_spent_seconds=30, at=clock)
print(f"retake:        {result.score}/{result.total} = {result.percentage:.0f}% "
      f"-> passed={result.passed}, +{result.points} points")
for kind, node in ((s.value, n) for n, s in delta.changes):
    print(f"  unlock change: {node} -> {kind}")
for effect in effects:
    shown = "shown" if effect.surfaced else "computed only"
    element = effect.element.name if effect.element else "baseline"
    print(f"  effect: {effect.effect_kind.value:20} [{element}] ({shown})")

# a timed quiz is announced with a countdown for Time Pressure learners
clock += timedelta(minutes=1)
effects = app.view_content(user, "31285", "30386", at=clock)
for effect in effects:
    print(f"\nviewing the timed quiz raises: {effect.effect_kind.value} "
          f"{dict(effect.details)}")
