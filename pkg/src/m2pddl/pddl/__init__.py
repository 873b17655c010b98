"""PDDL abstract syntax, canonical printer, parser and validator."""

from .parser import parse_domain, parse_literal, parse_params, parse_problem
from .printer import print_domain, print_problem
from .syntax import (
    REQUIREMENTS,
    ROOT_TYPE,
    ActionSchema,
    Literal,
    PddlDomain,
    PddlProblem,
    Predicate,
    is_identifier,
    is_variable,
)
from .validate import validate_domain, validate_problem

__all__ = [
    "REQUIREMENTS",
    "ROOT_TYPE",
    "ActionSchema",
    "Literal",
    "PddlDomain",
    "PddlProblem",
    "Predicate",
    "is_identifier",
    "is_variable",
    "parse_domain",
    "parse_literal",
    "parse_params",
    "parse_problem",
    "print_domain",
    "print_problem",
    "validate_domain",
    "validate_problem",
]
