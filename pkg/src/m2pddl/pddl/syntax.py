"""Immutable AST for the STRIPS + typing + negative-preconditions subset."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

ROOT_TYPE = "object"

REQUIREMENTS = (":strips", ":typing", ":negative-preconditions")

RESERVED = frozenset(
    {
        "and", "not", "or", "object", "define", "domain", "problem",
        "either", "exists", "forall", "imply", "when", "preference",
    }
)

_IDENT = re.compile(r"[a-z][a-z0-9_-]*\Z")

Param = tuple[str, str]  # (variable or constant name, type name)


def is_identifier(name: str) -> bool:
    """True for lowercase PDDL names that are not reserved words."""
    return bool(_IDENT.match(name)) and name not in RESERVED


def is_variable(term: str) -> bool:
    return term.startswith("?")


def is_variable_name(term: str) -> bool:
    return is_variable(term) and bool(_IDENT.match(term[1:]))


def format_params(params: Iterable[Param]) -> str:
    return " ".join(f"{name} - {type_}" for name, type_ in params)


@dataclass(frozen=True, order=True)
class Literal:
    predicate: str
    args: tuple[str, ...] = ()
    positive: bool = True

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    @property
    def atom(self) -> "Literal":
        return self if self.positive else Literal(self.predicate, self.args)

    def negate(self) -> "Literal":
        return Literal(self.predicate, self.args, not self.positive)

    def is_ground(self) -> bool:
        return not any(is_variable(a) for a in self.args)

    def variables(self) -> list[str]:
        return [a for a in self.args if is_variable(a)]

    def substitute(self, binding: dict[str, str]) -> "Literal":
        return Literal(self.predicate, tuple(binding.get(a, a) for a in self.args), self.positive)

    def __str__(self) -> str:
        inner = "(" + " ".join((self.predicate, *self.args)) + ")"
        return inner if self.positive else f"(not {inner})"


@dataclass(frozen=True)
class Predicate:
    name: str
    params: tuple[Param, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(tuple(p) for p in self.params))

    @property
    def arity(self) -> int:
        return len(self.params)

    def __str__(self) -> str:
        if not self.params:
            return f"({self.name})"
        return f"({self.name} {format_params(self.params)})"


@dataclass(frozen=True)
class ActionSchema:
    name: str
    params: tuple[Param, ...] = ()
    precondition: tuple[Literal, ...] = ()
    effect: tuple[Literal, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(tuple(p) for p in self.params))
        object.__setattr__(self, "precondition", tuple(self.precondition))
        object.__setattr__(self, "effect", tuple(self.effect))

    def literals(self) -> Iterator[Literal]:
        yield from self.precondition
        yield from self.effect


@dataclass(frozen=True)
class PddlDomain:
    name: str
    requirements: frozenset[str] = frozenset({":strips"})
    types: tuple[tuple[str, str], ...] = ()  # (type, parent) in declaration order
    predicates: tuple[Predicate, ...] = ()
    actions: tuple[ActionSchema, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "requirements", frozenset(self.requirements))
        object.__setattr__(self, "types", tuple(tuple(t) for t in self.types))
        object.__setattr__(self, "predicates", tuple(self.predicates))
        object.__setattr__(self, "actions", tuple(self.actions))

    def type_parents(self) -> dict[str, str]:
        return dict(self.types)

    def type_names(self) -> set[str]:
        return {ROOT_TYPE} | {t for t, _ in self.types}

    def predicate(self, name: str) -> Predicate | None:
        for pred in self.predicates:
            if pred.name == name:
                return pred
        return None

    def action(self, name: str) -> ActionSchema | None:
        for act in self.actions:
            if act.name == name:
                return act
        return None

    def is_subtype(self, sub: str, sup: str) -> bool:
        return sup in ancestors(sub, self.type_parents())


@dataclass(frozen=True)
class PddlProblem:
    """A task instance.

    ``objects`` is kept sorted by (type, name) and ``init`` is a set, so
    problems that differ only in insertion order compare equal.
    """

    name: str
    domain_name: str
    objects: tuple[Param, ...] = ()
    init: frozenset[Literal] = field(default_factory=frozenset)
    goal: tuple[Literal, ...] = ()

    def __post_init__(self):
        objects = tuple(sorted((tuple(o) for o in self.objects), key=lambda o: (o[1], o[0])))
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "init", frozenset(self.init))
        object.__setattr__(self, "goal", tuple(self.goal))
        negative = [lit for lit in self.init if not lit.positive]
        if negative:
            raise ValueError(f"init may only hold positive atoms, got {negative[0]}")

    def object_types(self) -> dict[str, str]:
        return dict(self.objects)


def ancestors(type_name: str, parents: dict[str, str]) -> list[str]:
    """``type_name`` followed by its chain of parents up to ``object``.

    Stops quietly on a cycle; cycles are reported by the validator.
    """
    chain = [type_name]
    seen = {type_name}
    current = type_name
    while current in parents:
        current = parents[current]
        if current in seen:
            break
        chain.append(current)
        seen.add(current)
    if ROOT_TYPE not in seen:
        chain.append(ROOT_TYPE)
    return chain
