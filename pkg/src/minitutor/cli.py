"""Command-line client for the feedback engine.

Subcommands: ``check`` a student file against an exercise, ``serve`` the
HTTP API, ``validate`` exercise documents, ``gen-examples`` to print an
exercise's generated example set. Exit codes for ``check``: 0 Correct,
1 OnTrack, 2 OffTrack, 3 TooComplex or Inconclusive, 4 input error.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path
from typing import Optional

from .checker import ground_text
from .config import Budgets, load_config
from .engine import Classification, Exercise, give_feedback
from .exercises import load_exercise_file, validate_exercise
from .wire import to_response

EXIT = {
    Classification.CORRECT: 0,
    Classification.ON_TRACK: 1,
    Classification.OFF_TRACK: 2,
    Classification.TOO_COMPLEX: 3,
    Classification.INCONCLUSIVE: 3,
}
EXIT_INPUT_ERROR = 4


def _load_exercise(path: str, seed: Optional[int]) -> Exercise:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise SystemExit(_input_error(f"cannot read exercise {path!r}: {e}"))
    if seed is not None:
        doc.setdefault("generator", {})["seed"] = seed
    result = validate_exercise(doc)
    if isinstance(result, list):
        for err in result:
            print(f"error: {err}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT_ERROR)
    return result


def _input_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_INPUT_ERROR


def cmd_check(args: argparse.Namespace) -> int:
    ex = _load_exercise(args.exercise, args.seed)
    try:
        source = Path(args.student).read_text(encoding="utf-8")
    except OSError as e:
        return _input_error(f"cannot read student file: {e}")
    budgets = Budgets()
    if args.budget_ms:
        budgets = dataclasses.replace(budgets, synth_time_ms=args.budget_ms,
                                      recovery_time_ms=args.budget_ms)
    fb = give_feedback(ex, source, budgets)
    response = to_response(ex, fb)
    if args.json:
        print(response.model_dump_json(indent=2))
    else:
        _print_report(response)
    return EXIT[fb.classification]


def _print_report(r) -> None:
    print(f"classification: {r.classification}")
    if r.error:
        where = f" at {r.error.line}:{r.error.col}" if r.error.line else ""
        print(f"{r.error.kind}{where}: {r.error.message}")
    if r.counterexample:
        print(f"counterexample: {r.counterexample.text}")
    if r.violated_properties:
        print("violated properties: " + ", ".join(r.violated_properties))
    if r.conflict:
        a, b = r.conflict.pair
        print(f"conflicting requirements on hole ?{r.conflict.hole}:")
        print(f"  {a.text}")
        print(f"  {b.text}")
    for spec in r.hole_specs:
        print(f"hole ?{spec.hole} should satisfy:")
        for e in spec.examples:
            print(f"  {e.text}")
    if r.repair:
        print("suggested repair (replacing " + ", ".join(r.repair.replaced) + "):")
        for line in r.repair.program.rstrip().splitlines():
            print(f"  {line}")
    if r.advice:
        print(f"advice: consider an approach built on '{r.advice}'")


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    cfg = load_config(args.config)
    if args.exercises:
        cfg = dataclasses.replace(cfg, exercises_dir=args.exercises)
    if args.port:
        cfg = dataclasses.replace(cfg, port=args.port)
    app = create_app(cfg)
    uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="info")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    status = 0
    for path in args.exercise:
        result = load_exercise_file(path)
        if isinstance(result, list):
            status = EXIT_INPUT_ERROR
            print(f"{path}: INVALID")
            for err in result:
                print(f"  - {err}")
        else:
            print(f"{path}: ok ({len(result.examples)} examples, "
                  f"{len(result.models)} model(s), {len(result.properties)} properties)")
    return status


def cmd_gen_examples(args: argparse.Namespace) -> int:
    ex = _load_exercise(args.exercise, args.seed)
    if args.json:
        print(json.dumps([{"input": e.input, "output": e.expected} for e in ex.examples]))
    else:
        for e in ex.examples:
            print(f"{ex.entry} {ground_text(e.input)} == {ground_text(e.expected)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minitutor",
                                     description="feedback engine for hole-bearing exercises")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check a student file against an exercise")
    p.add_argument("exercise", help="exercise document (.json)")
    p.add_argument("student", help="student source file (.mt)")
    p.add_argument("--json", action="store_true", help="print the wire-format JSON")
    p.add_argument("--budget-ms", type=int, default=None, help="synthesis budget")
    p.add_argument("--seed", type=int, default=None, help="override the generator seed")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--exercises", default=None, help="directory of exercise documents")
    p.add_argument("--config", default=None, help="JSON config file")
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("validate", help="validate exercise documents")
    p.add_argument("exercise", nargs="+")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("gen-examples", help="print an exercise's generated examples")
    p.add_argument("exercise")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=cmd_gen_examples)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
