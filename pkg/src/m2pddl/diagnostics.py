"""Structured diagnostics shared by every validation pass."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Optional

ERROR = "error"
WARNING = "warning"

# Closed set of diagnostic codes. Anything emitted must be listed here.
CODES: dict[str, str] = {
    # PDDL text parsing
    "lexical-error": "character that cannot start a PDDL token",
    "unbalanced-parentheses": "missing or surplus parenthesis",
    "syntax-error": "well-balanced text that does not match the PDDL subset grammar",
    "unknown-section": "section keyword outside the supported subset",
    "unsupported-requirement": "requirement flag outside :strips/:typing/:negative-preconditions",
    "duplicate-init-atom": "the same atom listed twice in :init",
    # PDDL domain validation
    "undeclared-predicate": "literal names a predicate that is not declared",
    "arity-mismatch": "literal argument count differs from predicate arity",
    "unknown-type": "type referenced but never declared",
    "duplicate-name": "two declarations share a name",
    "unbound-variable": "variable not declared in the action parameters",
    "contradictory-effect": "effect adds and deletes the same atom",
    "type-cycle": "type hierarchy contains a cycle",
    # PDDL problem validation
    "domain-name-mismatch": "problem refers to a different domain",
    "unknown-object": "literal argument is not a declared object",
    "unknown-predicate": "problem literal names an undeclared predicate",
    "type-mismatch": "object type is not a subtype of the parameter type",
    "non-ground-literal": "problem literal contains a variable",
    # model document
    "malformed-document": "model document does not follow the exchange schema",
    "duplicate-element-id": "two elements share an id",
    "dangling-relation": "relation or owner references a missing element",
    "containment-cycle": "containment graph is cyclic",
    "unknown-root": "scope root is not an element of the model",
    # product data
    "ragged-row": "row length differs from header length",
    "duplicate-key": "key column value repeated",
    "missing-key-column": "key column absent from header or empty in a row",
    # profile and binding
    "unknown-stereotype": "stereotype is not part of the PDDL profile",
    "missing-required-tag": "stereotype lacks a required tag",
    "stereotype-kind-mismatch": "stereotype applied to a disallowed element kind",
    "duplicate-pddl-name": "two elements bind the same PDDL name",
    "invalid-identifier": "tag value is not a legal PDDL name",
    "unknown-parent-type": "type tag names an undeclared type",
    "undeclared-predicate-in-action": "action literal uses a predicate absent from the static binding",
    "unbound-action-variable": "action literal uses a variable that is not a parameter",
    "template-column-missing": "annotation rule references a column absent from the product data",
    "type-mismatch-in-rule": "annotation rule produces an object of an incompatible type",
    # generation
    "empty-goal": "goal conjunction is empty",
    "object-name-collision": "product object shadows a model object",
    "io-error": "file could not be read or written",
    # planning
    "grounding-explosion": "ground action count exceeds the cap",
}


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    message: str
    location: str = ""
    stage: Optional[str] = None

    def __post_init__(self):
        if self.code not in CODES:
            raise ValueError(f"undocumented diagnostic code {self.code!r}")
        if self.severity not in (ERROR, WARNING):
            raise ValueError(f"bad severity {self.severity!r}")

    @property
    def is_error(self) -> bool:
        return self.severity == ERROR

    def with_stage(self, stage: str) -> "Diagnostic":
        return replace(self, stage=stage)

    def format(self) -> str:
        """One-line ``SEVERITY CODE LOCATION MESSAGE`` rendering."""
        loc = self.location or "-"
        msg = f"[{self.stage}] {self.message}" if self.stage else self.message
        return f"{self.severity.upper()} {self.code} {loc} {msg}"

    def to_dict(self) -> dict:
        return {
            "severity": self.severity,
            "code": self.code,
            "message": self.message,
            "location": self.location,
            "stage": self.stage,
        }


def error(code: str, message: str, location: str = "") -> Diagnostic:
    return Diagnostic(ERROR, code, message, location)


def warning(code: str, message: str, location: str = "") -> Diagnostic:
    return Diagnostic(WARNING, code, message, location)


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)


class DiagnosticError(Exception):
    """Raised when an operation cannot produce its result.

    The offending diagnostics are kept on ``self.diagnostics``.
    """

    def __init__(self, diagnostics: Iterable[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(d.format() for d in self.diagnostics))

    @property
    def codes(self) -> list[str]:
        return [d.code for d in self.diagnostics]

    def with_stage(self, stage: str) -> "DiagnosticError":
        return DiagnosticError(d.with_stage(stage) for d in self.diagnostics)
