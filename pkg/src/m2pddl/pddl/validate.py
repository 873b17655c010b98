"""Semantic checks for domains and problems.

Both validators return every violation they find instead of stopping at
the first one; an empty list means the AST is well-formed.
"""

from __future__ import annotations

from collections import Counter

from ..diagnostics import Diagnostic, error
from .syntax import (
    ROOT_TYPE,
    ActionSchema,
    Literal,
    PddlDomain,
    PddlProblem,
    ancestors,
    is_variable,
)


def _duplicates(names) -> list[str]:
    return [name for name, n in Counter(names).items() if n > 1]


def _type_cycles(types: tuple[tuple[str, str], ...]) -> list[list[str]]:
    parents = dict(types)
    cycles = []
    done: set[str] = set()
    for start in parents:
        path: list[str] = []
        on_path: set[str] = set()
        node = start
        while node in parents and node not in done and node not in on_path:
            path.append(node)
            on_path.add(node)
            node = parents[node]
        if node in on_path:
            cycles.append(path[path.index(node):])
        done.update(path)
    return cycles


def _check_params(params, where: str, types: set[str], out: list[Diagnostic]) -> None:
    for var in _duplicates(name for name, _ in params):
        out.append(error("duplicate-name", f"parameter {var} declared twice", where))
    for var, type_ in params:
        if type_ not in types:
            out.append(error("unknown-type", f"parameter {var} has undeclared type {type_}", where))


def _check_action(action: ActionSchema, domain: PddlDomain, types: set[str], out: list[Diagnostic]) -> None:
    where = f"action:{action.name}"
    _check_params(action.params, where, types, out)
    bound = {var for var, _ in action.params}
    for lit in action.literals():
        pred = domain.predicate(lit.predicate)
        if pred is None:
            out.append(error("undeclared-predicate", f"{lit} uses undeclared predicate {lit.predicate}", where))
        elif pred.arity != len(lit.args):
            out.append(
                error("arity-mismatch", f"{lit} has {len(lit.args)} arguments, {lit.predicate} takes {pred.arity}", where)
            )
        for arg in lit.args:
            if not is_variable(arg):
                out.append(error("unbound-variable", f"{lit} uses constant {arg}; schemas take variables only", where))
            elif arg not in bound:
                out.append(error("unbound-variable", f"{lit} uses undeclared variable {arg}", where))
    effect = set(action.effect)
    for lit in action.effect:
        if lit.positive and lit.negate() in effect:
            out.append(error("contradictory-effect", f"effect both adds and deletes {lit}", where))


def validate_domain(domain: PddlDomain) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    for name in _duplicates(t for t, _ in domain.types):
        out.append(error("duplicate-name", f"type {name} declared twice", f"type:{name}"))
    types = domain.type_names()
    for name, parent in domain.types:
        if name == ROOT_TYPE:
            out.append(error("duplicate-name", "type object is implicit and cannot be redeclared", "type:object"))
        if parent not in types:
            out.append(error("unknown-type", f"type {name} has undeclared parent {parent}", f"type:{name}"))
    for cycle in _type_cycles(domain.types):
        out.append(error("type-cycle", "type cycle " + " -> ".join(cycle + cycle[:1]), f"type:{cycle[0]}"))

    for name in _duplicates(p.name for p in domain.predicates):
        out.append(error("duplicate-name", f"predicate {name} declared twice", f"predicate:{name}"))
    for pred in domain.predicates:
        _check_params(pred.params, f"predicate:{pred.name}", types, out)

    for name in _duplicates(a.name for a in domain.actions):
        out.append(error("duplicate-name", f"action {name} declared twice", f"action:{name}"))
    for action in domain.actions:
        _check_action(action, domain, types, out)
    return out


def _check_ground_literal(
    lit: Literal, where: str, domain: PddlDomain, objects: dict[str, str], out: list[Diagnostic]
) -> None:
    pred = domain.predicate(lit.predicate)
    if pred is None:
        out.append(error("unknown-predicate", f"{lit} uses undeclared predicate {lit.predicate}", where))
    elif pred.arity != len(lit.args):
        out.append(error("arity-mismatch", f"{lit} has {len(lit.args)} arguments, {lit.predicate} takes {pred.arity}", where))
    parents = domain.type_parents()
    for i, arg in enumerate(lit.args):
        if is_variable(arg):
            out.append(error("non-ground-literal", f"{lit} contains variable {arg}", where))
        elif arg not in objects:
            out.append(error("unknown-object", f"{lit} references undeclared object {arg}", where))
        elif pred is not None and i < pred.arity:
            wanted = pred.params[i][1]
            if wanted not in ancestors(objects[arg], parents):
                out.append(
                    error("type-mismatch", f"{arg} is a {objects[arg]} but {lit.predicate} expects {wanted}", where)
                )


def validate_problem(problem: PddlProblem, domain: PddlDomain) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    if problem.domain_name != domain.name:
        out.append(
            error("domain-name-mismatch", f"problem targets {problem.domain_name}, domain is {domain.name}", "domain")
        )
    for name in _duplicates(o for o, _ in problem.objects):
        out.append(error("duplicate-name", f"object {name} declared twice", f"object:{name}"))
    types = domain.type_names()
    for name, type_ in problem.objects:
        if type_ not in types:
            out.append(error("unknown-type", f"object {name} has undeclared type {type_}", f"object:{name}"))
    objects = problem.object_types()
    for lit in sorted(problem.init):
        _check_ground_literal(lit, "init", domain, objects, out)
    for lit in problem.goal:
        _check_ground_literal(lit, "goal", domain, objects, out)
    return out
