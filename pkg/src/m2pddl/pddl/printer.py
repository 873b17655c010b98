"""Canonical PDDL rendering.

The layout is part of the contract: lowercase keywords, two-space
indentation, one construct per line, declaration order for domains and
sorted objects/init for problems. Equal ASTs give identical bytes.
"""

from __future__ import annotations

from itertools import groupby

from ..diagnostics import DiagnosticError
from .syntax import REQUIREMENTS, Literal, PddlDomain, PddlProblem, format_params
from .validate import validate_domain, validate_problem

INDENT = "  "


def _conjunction(literals: tuple[Literal, ...]) -> str:
    return "(and " + " ".join(str(lit) for lit in literals) + ")"


def _requirements(reqs) -> str:
    ordered = [r for r in REQUIREMENTS if r in reqs]
    return "(:requirements " + " ".join(ordered) + ")"


def print_domain(domain: PddlDomain) -> str:
    errors = [d for d in validate_domain(domain) if d.is_error]
    if errors:
        raise DiagnosticError(errors)

    lines = [f"(define (domain {domain.name})"]
    if domain.requirements:
        lines.append(INDENT + _requirements(domain.requirements))
    if domain.types:
        lines.append(INDENT + "(:types")
        lines += [f"{INDENT * 2}{name} - {parent}" for name, parent in domain.types]
        lines.append(INDENT + ")")
    if domain.predicates:
        lines.append(INDENT + "(:predicates")
        lines += [INDENT * 2 + str(pred) for pred in domain.predicates]
        lines.append(INDENT + ")")
    for action in domain.actions:
        lines.append(f"{INDENT}(:action {action.name}")
        lines.append(f"{INDENT * 2}:parameters ({format_params(action.params)})")
        lines.append(f"{INDENT * 2}:precondition {_conjunction(action.precondition)}")
        lines.append(f"{INDENT * 2}:effect {_conjunction(action.effect)}")
        lines.append(INDENT + ")")
    lines.append(")")
    return "\n".join(lines)


def print_problem(problem: PddlProblem, domain: PddlDomain | None = None) -> str:
    """Render ``problem``; validated against ``domain`` when one is given."""
    if domain is not None:
        errors = [d for d in validate_problem(problem, domain) if d.is_error]
        if errors:
            raise DiagnosticError(errors)

    lines = [f"(define (problem {problem.name})", f"{INDENT}(:domain {problem.domain_name})"]
    if problem.objects:
        lines.append(INDENT + "(:objects")
        for type_, group in groupby(problem.objects, key=lambda o: o[1]):
            names = " ".join(name for name, _ in group)
            lines.append(f"{INDENT * 2}{names} - {type_}")
        lines.append(INDENT + ")")
    else:
        lines.append(INDENT + "(:objects )")
    if problem.init:
        lines.append(INDENT + "(:init")
        lines += [INDENT * 2 + text for text in sorted(str(lit) for lit in problem.init)]
        lines.append(INDENT + ")")
    else:
        lines.append(INDENT + "(:init )")
    if problem.goal:
        lines.append(INDENT + "(:goal (and")
        lines += [INDENT * 2 + str(lit) for lit in problem.goal]
        lines.append(INDENT + "))")
    else:
        lines.append(INDENT + "(:goal (and ))")
    lines.append(")")
    return "\n".join(lines)
