"""
Seeded cohort simulation
========================

Thirty-seven scripted agents (6 NF, 8 NT, 8 SF, 15 ST) register, take the
assessment, and work the course with per-core accuracy and persistence.
The run is deterministic: each agent derives its RNG from the cohort seed
and its index, so re-running yields byte-identical exports. The same
cohort can also be produced from the CLI:

    gamelearn simulate --out /tmp/run
    gamelearn replay --log /tmp/run/events.jsonl
"""

from gamelearn.simulator import (
    element_coverage_gaps,
    load_cohort_config,
    run_cohort,
    verify_invariants,
)

config = load_cohort_config()
result = run_cohort(config)
cohort = result.summary["cohort"]

print(f"simulated n={cohort['n']} learners")
for core, count in sorted(cohort["core_counts"].items()):
    pct = cohort["core_percentages"][core]
    print(f"  {core}: {count:2} ({pct}%)")
print(f"completed: {cohort['completion_count']} ({cohort['completion_pct']}%)")
print(f"survey responses: {cohort['response_count']}")

print(f"\nactivity log rows: {len(result.core.activity_logs[result.course_id])}")
print("log head:")
for line in result.log_csv.splitlines()[:4]:
    print(f"  {line}")

rows = result.core.leaderboard(result.course_id)
print("\nleaderboard top 5:")
for row in rows[:5]:
    print(f"  #{row.rank} learner {row.learner_id}: {row.points_total} points")

print(f"\ninvariant problems: {verify_invariants(result.core, result.course_id) or 'none'}")
print(f"elements never surfaced: {element_coverage_gaps(result.core, result.course_id) or 'none'}")

# determinism check: a second run matches byte for byte
again = run_cohort(config)
print(f"second run byte-identical: {again.log_csv == result.log_csv}")
