"""Command-line entry points: simulate a cohort, replay an event log, or
serve the HTTP API. Exit status is nonzero whenever an invariant check
fails."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import service, simulator
from .store import AppCore


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = simulator.load_cohort_config(args.config)
    if args.seed is not None:
        config = simulator.CohortConfig(
            seed=args.seed,
            counts=config.counts,
            course=config.course,
            profiles=config.profiles,
            start_date=config.start_date,
        )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = simulator.run_cohort(config, storage_path=out / "events.jsonl")
    (out / "logs.csv").write_text(result.log_csv)
    (out / "evaluations.csv").write_text(
        simulator.evaluations_csv(result.core, result.course_id)
    )
    (out / "summary.json").write_text(json.dumps(result.summary, indent=2, sort_keys=True))

    problems = list(result.liveness_failures)
    problems += [f"element never surfaced: {e}" for e in result.missing_elements]
    problems += simulator.verify_invariants(result.core, result.course_id)
    cohort = result.summary["cohort"]
    print(
        f"simulated {cohort['n']} learners, {cohort['completion_count']} completions "
        f"({cohort['completion_pct']}%), outputs in {out}"
    )
    for problem in problems:
        print(f"INVARIANT FAILURE: {problem}", file=sys.stderr)
    return 1 if problems else 0


def _cmd_replay(args: argparse.Namespace) -> int:
    app = AppCore(storage_path=args.log)
    problems: list[str] = []
    for course_id in app.courses:
        problems += simulator.verify_invariants(app, course_id)
        if args.out:
            Path(args.out).mkdir(parents=True, exist_ok=True)
            Path(args.out, "logs.csv").write_text(
                simulator.sorted_log_csv(app.activity_logs[course_id].records)
            )
        print(json.dumps(app.report(course_id), indent=2, sort_keys=True))
    for problem in problems:
        print(f"INVARIANT FAILURE: {problem}", file=sys.stderr)
    return 1 if problems else 0


def _cmd_serve(_args: argparse.Namespace) -> int:
    service.main()
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="gamelearn")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a scripted learner cohort")
    p_sim.add_argument("--config", default=None, help="cohort YAML (default: shipped fixture)")
    p_sim.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.set_defaults(func=_cmd_simulate)

    p_rep = sub.add_parser("replay", help="rebuild engine state from an event log")
    p_rep.add_argument("--log", required=True, help="JSON-lines event log")
    p_rep.add_argument("--out", default=None, help="directory for the re-exported CSV")
    p_rep.set_defaults(func=_cmd_replay)

    p_srv = sub.add_parser("serve", help="run the HTTP API (config via environment)")
    p_srv.set_defaults(func=_cmd_serve)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
