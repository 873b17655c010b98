"""Command-line entry point: one subcommand per workflow phase.

Exit codes: 0 success, 1 diagnostics with errors (or invalid/unsolvable),
2 usage error, 3 resource limit. Diagnostics go to stderr as
``SEVERITY CODE LOCATION MESSAGE`` lines; data goes to stdout.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from pathlib import Path

from .diagnostics import DiagnosticError, has_errors
from .generator import PipelineConfig, generate_domain, run_pipeline
from .model import load_model, select_scope
from .pddl import parse_domain, parse_problem, print_domain, print_problem, validate_domain, validate_problem
from .planner import (
    DEFAULT_NODE_CAP,
    STRATEGIES,
    ResourceLimit,
    Unsolvable,
    format_plan,
    ground,
    parse_plan,
    solve,
    validate_plan,
)
from .profile import bind_actions, bind_static, check_profile

EXIT_OK = 0
EXIT_ERRORS = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


class UsageError(Exception):
    pass


def _emit(diagnostics) -> None:
    for d in diagnostics:
        print(d.format(), file=sys.stderr)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _node_cap() -> int:
    raw = os.environ.get("M2PDDL_NODE_CAP")
    if raw is None:
        return DEFAULT_NODE_CAP
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"M2PDDL_NODE_CAP must be an integer, got {raw!r}") from None


def _load_task(domain_path: str, problem_path: str):
    """Parse and validate both files; raises DiagnosticError on any error."""
    found = []
    domain = parse_domain(_read(domain_path), found)
    problem = parse_problem(_read(problem_path), found)
    found += validate_domain(domain)
    if not has_errors(found):
        found += validate_problem(problem, domain)
    if has_errors(found):
        raise DiagnosticError(found)
    _emit(found)
    return domain, problem


def cmd_validate(args) -> int:
    text = _read(args.model)
    found = []
    try:
        model = load_model(text)
        if args.scope:
            model = select_scope(model, args.scope)
        found = check_profile(model)
        if has_errors(found):
            raise DiagnosticError(found)
        binding = bind_actions(model, bind_static(model))
        found += validate_domain(generate_domain(binding))
    except DiagnosticError as exc:
        _emit(exc.diagnostics)
        return EXIT_ERRORS
    _emit(found)
    return EXIT_ERRORS if has_errors(found) else EXIT_OK


def cmd_generate(args) -> int:
    try:
        config = PipelineConfig(args.name, args.rules, args.out, args.key_column, args.scope)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = run_pipeline(args.model, args.product, config)
    _emit(report.diagnostics)
    if not report.ok:
        return EXIT_ERRORS
    print(report.to_json())
    return EXIT_OK


def cmd_plan(args) -> int:
    cap = _node_cap()
    try:
        domain, problem = _load_task(args.domain, args.problem)
        task = ground(domain, problem)
    except DiagnosticError as exc:
        _emit(exc.diagnostics)
        return EXIT_RESOURCE if "grounding-explosion" in exc.codes else EXIT_ERRORS
    try:
        plan = solve(task, args.strategy, node_cap=cap)
    except Unsolvable as exc:
        print(f"unsolvable: {exc}", file=sys.stderr)
        return EXIT_ERRORS
    except ResourceLimit as exc:
        print(f"resource-limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    text = format_plan(plan)
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_ERRORS
    else:
        sys.stdout.write(text)
    print(f"plan length {plan.cost}")
    return EXIT_OK


def cmd_check_plan(args) -> int:
    try:
        domain, problem = _load_task(args.domain, args.problem)
    except DiagnosticError as exc:
        _emit(exc.diagnostics)
        return EXIT_ERRORS
    try:
        plan = parse_plan(_read(args.plan))
    except ValueError as exc:
        print(f"malformed plan: {exc}", file=sys.stderr)
        return EXIT_ERRORS
    verdict = validate_plan(domain, problem, plan)
    if verdict.valid:
        print("VALID")
        return EXIT_OK
    print(f"INVALID at step {verdict.failure_step}: {verdict.reason}")
    print(verdict.detail, file=sys.stderr)
    return EXIT_ERRORS


_HEADER = re.compile(r"\(\s*define\s*\(\s*(domain|problem)\b", re.IGNORECASE)


def cmd_roundtrip(args) -> int:
    text = _read(args.pddl)
    m = _HEADER.search(text)
    is_problem = bool(m and m.group(1).lower() == "problem")
    parse, show = (parse_problem, print_problem) if is_problem else (parse_domain, print_domain)
    found = []
    try:
        first = parse(text, found)
        printed = show(first)
        second = parse(printed)
        reprinted = show(second)
    except DiagnosticError as exc:
        _emit(exc.diagnostics)
        return EXIT_ERRORS
    _emit(found)
    if first != second or printed != reprinted:
        print("not a fixed point", file=sys.stderr)
        return EXIT_ERRORS
    canonical = printed + "\n"
    print("fixed point; input is canonical" if canonical == text else "fixed point; input differs from canonical form")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="m2pddl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model document against the PDDL profile")
    p.add_argument("model")
    p.add_argument("--scope", metavar="ROOT")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("generate", help="generate domain and problem files")
    p.add_argument("model")
    p.add_argument("product")
    p.add_argument("rules")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--name", required=True)
    p.add_argument("--scope", metavar="ROOT")
    p.add_argument("--key-column", default="id")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("plan", help="solve a domain/problem pair")
    p.add_argument("domain")
    p.add_argument("problem")
    p.add_argument("--strategy", choices=STRATEGIES, default="bfs")
    p.add_argument("--out", metavar="PLAN")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("check-plan", help="simulate a plan and report validity")
    p.add_argument("domain")
    p.add_argument("problem")
    p.add_argument("plan")
    p.set_defaults(func=cmd_check_plan)

    p = sub.add_parser("roundtrip", help="parse, reprint and reparse a PDDL file")
    p.add_argument("pddl")
    p.set_defaults(func=cmd_roundtrip)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
