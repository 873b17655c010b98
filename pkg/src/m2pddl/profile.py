"""PDDL stereotype profile and the binding of model elements to PDDL constructs.

Static constructs (types, predicates, objects, model-level init/goal atoms)
are bound first; actions are bound afterwards and may only use what the
static binding declares.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Mapping, Optional

from .diagnostics import Diagnostic, DiagnosticError, error, warning
from .pddl import (
    ROOT_TYPE,
    ActionSchema,
    Literal,
    PddlDomain,
    Predicate,
    is_identifier,
    is_variable,
    parse_literal,
    parse_params,
    validate_domain,
)
from .pddl.syntax import ancestors

if TYPE_CHECKING:
    from .model import Element, ModelDocument
    from .product import ProductRecordSet


@dataclass(frozen=True)
class StereotypeSpec:
    name: str
    required: tuple[str, ...]
    optional: tuple[str, ...] = ()
    kinds: frozenset[str] = frozenset()


CATALOG_VERSION = "1.0"

CATALOG: Mapping[str, StereotypeSpec] = {
    spec.name: spec
    for spec in (
        StereotypeSpec("pddl-domain", ("name",), (), frozenset({"block"})),
        StereotypeSpec("pddl-type", ("name",), ("parent",), frozenset({"block", "part"})),
        StereotypeSpec("pddl-predicate", ("name", "params"), (), frozenset({"constraint", "value"})),
        StereotypeSpec("pddl-action", ("name",), (), frozenset({"activity"})),
        StereotypeSpec("pddl-parameter", ("name", "type"), (), frozenset({"value", "port"})),
        StereotypeSpec("pddl-precondition", ("literal",), (), frozenset({"constraint"})),
        StereotypeSpec("pddl-effect", ("literal",), (), frozenset({"constraint"})),
        StereotypeSpec("pddl-object", ("name", "type"), (), frozenset({"part", "block", "port"})),
        StereotypeSpec("pddl-problem", ("name",), (), frozenset({"block"})),
        StereotypeSpec("pddl-init", ("literal",), (), frozenset({"constraint", "value"})),
        StereotypeSpec("pddl-goal", ("literal",), (), frozenset({"constraint", "value"})),
    )
}

# An element may carry at most one of these; pddl-domain/pddl-problem are markers.
BINDING_CLASSES = (
    "pddl-type",
    "pddl-predicate",
    "pddl-action",
    "pddl-parameter",
    "pddl-precondition",
    "pddl-effect",
    "pddl-object",
    "pddl-init",
    "pddl-goal",
)
_ACTION_PARTS = ("pddl-parameter", "pddl-precondition", "pddl-effect")
# Stereotypes whose name tag lives in a shared PDDL namespace.
_NAMESPACES = {"pddl-domain": "domain", "pddl-type": "type", "pddl-predicate": "predicate",
               "pddl-action": "action", "pddl-object": "object", "pddl-problem": "problem"}


def check_profile(model: "ModelDocument", catalog: Mapping[str, StereotypeSpec] = CATALOG) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    names: dict[tuple[str, str], str] = {}
    by_id = {el.id: el for el in model.elements}
    for el in model.elements:
        bound = [st.name for st in el.stereotypes if st.name in BINDING_CLASSES]
        if len(bound) > 1:
            out.append(error("stereotype-kind-mismatch", f"conflicting stereotypes {bound} on one element", el.id))
        for st in el.stereotypes:
            spec = catalog.get(st.name)
            if spec is None:
                # Foreign (non-PDDL) stereotypes are tolerated but flagged.
                make = error if st.name.startswith("pddl-") else warning
                out.append(make("unknown-stereotype", f"stereotype {st.name} is not in the PDDL profile", el.id))
                continue
            if el.kind not in spec.kinds:
                out.append(
                    error("stereotype-kind-mismatch", f"{st.name} cannot be applied to a {el.kind}", el.id)
                )
            for tag in spec.required:
                if tag not in st.tags:
                    out.append(error("missing-required-tag", f"{st.name} requires tag {tag!r}", el.id))
            if st.name in _ACTION_PARTS:
                owner = by_id.get(el.owner) if el.owner else None
                if owner is None or owner.stereotype("pddl-action") is None:
                    out.append(
                        error("stereotype-kind-mismatch", f"{st.name} must be owned by a pddl-action element", el.id)
                    )
            space = _NAMESPACES.get(st.name)
            if space and "name" in st.tags:
                key = (space, st.tags["name"].strip().lower())
                if key in names:
                    out.append(
                        error("duplicate-pddl-name", f"{space} {key[1]} already bound by {names[key]}", el.id)
                    )
                else:
                    names[key] = el.id
    for el in model.elements:
        if el.stereotype("pddl-action") is None:
            continue
        seen: dict[str, str] = {}
        for child in model.owned_by(el.id):
            st = child.stereotype("pddl-parameter")
            if st is None or "name" not in st.tags:
                continue
            var = _variable_name(st.tags["name"])
            if var in seen:
                out.append(error("duplicate-pddl-name", f"parameter {var} already bound by {seen[var]}", child.id))
            seen[var] = child.id
    return out


@dataclass(frozen=True)
class DomainBinding:
    """Resolved mapping from model element ids to PDDL constructs."""

    domain_name: str
    types: dict = field(default_factory=dict)  # id -> (type, parent)
    predicates: dict = field(default_factory=dict)  # id -> Predicate
    objects: dict = field(default_factory=dict)  # id -> (constant, type)
    actions: dict = field(default_factory=dict)  # id -> ActionSchema
    init: dict = field(default_factory=dict)  # id -> Literal
    goal: dict = field(default_factory=dict)  # id -> Literal
    problem_name: Optional[str] = None

    def type_parents(self) -> dict[str, str]:
        return dict(self.types.values())

    def predicate(self, name: str) -> Optional[Predicate]:
        for pred in self.predicates.values():
            if pred.name == name:
                return pred
        return None

    def object_types(self) -> dict[str, str]:
        return dict(self.objects.values())

    def partial_domain(self) -> PddlDomain:
        return PddlDomain(
            self.domain_name,
            frozenset({":strips", ":typing"}),
            tuple(self.types.values()),
            tuple(self.predicates.values()),
            tuple(self.actions.values()),
        )


def _name_tag(el: "Element", stereotype: str, tag: str, out: list[Diagnostic]) -> Optional[str]:
    value = el.stereotype(stereotype).tags[tag].strip().lower()
    if not is_identifier(value):
        out.append(error("invalid-identifier", f"{stereotype} {tag} {value!r} is not a legal PDDL name", el.id))
        return None
    return value


def _variable_name(text: str) -> str:
    text = text.strip().lower()
    return text if text.startswith("?") else "?" + text


def _tag_literal(el: "Element", stereotype: str, out: list[Diagnostic]) -> Optional[Literal]:
    try:
        return parse_literal(el.stereotype(stereotype).tags["literal"])
    except DiagnosticError as exc:
        out.append(error("invalid-identifier", f"bad literal: {exc.diagnostics[0].message}", el.id))
        return None


def _check_atom(lit: Literal, el_id: str, binding: DomainBinding, out: list[Diagnostic]) -> None:
    pred = binding.predicate(lit.predicate)
    if pred is None:
        out.append(error("unknown-predicate", f"{lit} uses undeclared predicate {lit.predicate}", el_id))
    elif pred.arity != len(lit.args):
        out.append(error("arity-mismatch", f"{lit} has {len(lit.args)} arguments, expected {pred.arity}", el_id))
    if not lit.is_ground():
        out.append(error("non-ground-literal", f"{lit} must be ground", el_id))


def bind_static(model: "ModelDocument") -> DomainBinding:
    """Bind types, predicates, objects and model-level init/goal atoms."""
    out: list[Diagnostic] = []
    domain_name = re.sub(r"[^a-z0-9_-]+", "-", model.name.strip().lower()).strip("-")
    problem_name = None
    types: dict = {}
    predicates: dict = {}
    objects: dict = {}
    for el in model.elements:
        if el.stereotype("pddl-domain"):
            domain_name = _name_tag(el, "pddl-domain", "name", out) or domain_name
        if el.stereotype("pddl-problem"):
            problem_name = _name_tag(el, "pddl-problem", "name", out)
        if el.stereotype("pddl-type"):
            name = _name_tag(el, "pddl-type", "name", out)
            parent = el.stereotype("pddl-type").tags.get("parent", ROOT_TYPE).strip().lower() or ROOT_TYPE
            if name:
                types[el.id] = (name, parent)
    if not is_identifier(domain_name):
        out.append(error("invalid-identifier", f"domain name {domain_name!r} is not a legal PDDL name", "model"))
    declared = {ROOT_TYPE} | {t for t, _ in types.values()}
    for el_id, (name, parent) in types.items():
        if parent not in declared:
            out.append(error("unknown-parent-type", f"type {name} has undeclared parent {parent}", el_id))

    for el in model.elements:
        if el.stereotype("pddl-predicate"):
            name = _name_tag(el, "pddl-predicate", "name", out)
            try:
                params = parse_params(el.stereotype("pddl-predicate").tags["params"])
            except DiagnosticError as exc:
                out.append(error("invalid-identifier", f"bad params: {exc.diagnostics[0].message}", el.id))
                continue
            for var, type_ in params:
                if type_ not in declared:
                    out.append(error("unknown-parent-type", f"parameter {var} has undeclared type {type_}", el.id))
            if name:
                predicates[el.id] = Predicate(name, tuple(params))
        if el.stereotype("pddl-object"):
            name = _name_tag(el, "pddl-object", "name", out)
            type_ = el.stereotype("pddl-object").tags["type"].strip().lower()
            if type_ not in declared:
                out.append(error("unknown-parent-type", f"object {name} has undeclared type {type_}", el.id))
            if name:
                objects[el.id] = (name, type_)

    binding = DomainBinding(domain_name, types, predicates, objects, problem_name=problem_name)
    init: dict = {}
    goal: dict = {}
    for el in model.elements:
        for stereotype, target in (("pddl-init", init), ("pddl-goal", goal)):
            if el.stereotype(stereotype):
                lit = _tag_literal(el, stereotype, out)
                if lit is None:
                    continue
                if stereotype == "pddl-init" and not lit.positive:
                    out.append(error("invalid-identifier", f"init atom {lit} must be positive", el.id))
                    continue
                _check_atom(lit, el.id, binding, out)
                target[el.id] = lit

    if not out:
        out += [d for d in validate_domain(binding.partial_domain()) if d.is_error]
    if out:
        raise DiagnosticError(out)
    return replace(binding, init=init, goal=goal)


def bind_actions(model: "ModelDocument", static: DomainBinding) -> DomainBinding:
    """Complete ``static`` with one action schema per pddl-action element."""
    out: list[Diagnostic] = []
    declared_types = {ROOT_TYPE} | {t for t, _ in static.types.values()}
    actions: dict = {}
    for el in model.elements:
        if not el.stereotype("pddl-action"):
            continue
        name = _name_tag(el, "pddl-action", "name", out)
        params: list[tuple[str, str]] = []
        pre: list[tuple[str, Literal]] = []  # (child id, literal)
        eff: list[tuple[str, Literal]] = []
        for child in model.owned_by(el.id):
            if child.stereotype("pddl-parameter"):
                tags = child.stereotype("pddl-parameter").tags
                var = _variable_name(tags["name"])
                type_ = tags["type"].strip().lower()
                if not is_identifier(var[1:]):
                    out.append(error("invalid-identifier", f"parameter name {var!r} is not legal", child.id))
                if type_ not in declared_types:
                    out.append(error("unknown-parent-type", f"parameter {var} has undeclared type {type_}", child.id))
                params.append((var, type_))
            for stereotype, target in (("pddl-precondition", pre), ("pddl-effect", eff)):
                if child.stereotype(stereotype):
                    lit = _tag_literal(child, stereotype, out)
                    if lit is not None:
                        target.append((child.id, lit))
        bound = {var for var, _ in params}
        for child_id, lit in pre + eff:
            pred = static.predicate(lit.predicate)
            if pred is None:
                out.append(
                    error("undeclared-predicate-in-action", f"{lit} uses {lit.predicate}, not bound statically", child_id)
                )
            elif pred.arity != len(lit.args):
                out.append(
                    error("arity-mismatch", f"{lit} has {len(lit.args)} arguments, expected {pred.arity}", child_id)
                )
            for arg in lit.args:
                if not is_variable(arg) or arg not in bound:
                    out.append(error("unbound-action-variable", f"{lit} uses {arg}, not a parameter of {name}", child_id))
        if name:
            actions[el.id] = ActionSchema(name, tuple(params), tuple(l for _, l in pre), tuple(l for _, l in eff))
    binding = replace(static, actions=actions)
    if not out:
        out += [d for d in validate_domain(binding.partial_domain()) if d.is_error]
    if out:
        raise DiagnosticError(out)
    return binding


# -- product annotation -----------------------------------------------------

RULE_KINDS = ("object", "init", "goal")
_PLACEHOLDER = re.compile(r"<([^<>]+)>")


@dataclass(frozen=True)
class AnnotationRule:
    """Map a product-data column to objects or literals.

    ``object`` rules use the column value as the object name and
    ``template`` as its type. ``init``/``goal`` rules fill ``<column>``
    placeholders in a literal template, for rows where ``column`` is
    non-empty.
    """

    column: str
    kind: str
    template: str

    def placeholders(self) -> list[str]:
        return _PLACEHOLDER.findall(self.template)


@dataclass(frozen=True)
class Annotations:
    objects: tuple = ()  # (name, type)
    init: tuple[Literal, ...] = ()
    goal: tuple[Literal, ...] = ()


def load_rules(text: str) -> list[AnnotationRule]:
    """Read a ``.rules`` file: ``{"rules": [{"column", "kind", "template"}, ...]}``."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DiagnosticError([error("malformed-document", exc.msg, f"{exc.lineno}:{exc.colno}")]) from None
    records = raw.get("rules") if isinstance(raw, dict) else None
    if not isinstance(records, list):
        raise DiagnosticError([error("malformed-document", "expected an object with a 'rules' list", "rules")])
    rules = []
    for i, rec in enumerate(records):
        if not isinstance(rec, dict) or not all(isinstance(rec.get(k), str) for k in ("column", "kind", "template")):
            raise DiagnosticError([error("malformed-document", "rule needs string column/kind/template", f"rules[{i}]")])
        if rec["kind"] not in RULE_KINDS:
            raise DiagnosticError([error("malformed-document", f"rule kind must be one of {RULE_KINDS}", f"rules[{i}]")])
        rules.append(AnnotationRule(rec["column"], rec["kind"], rec["template"]))
    return rules


def dump_rules(rules: list[AnnotationRule]) -> str:
    records = [{"column": r.column, "kind": r.kind, "template": r.template} for r in rules]
    return json.dumps({"rules": records}, indent=2) + "\n"


def _template_literal(rule: AnnotationRule) -> tuple[Literal, dict[str, str]]:
    """Parse a template, standing placeholders in for variables."""
    columns: dict[str, str] = {}

    def sub(m):
        var = f"?col{len(columns)}"
        columns[var] = m.group(1)
        return var

    return parse_literal(_PLACEHOLDER.sub(sub, rule.template)), columns


def check_rules(rules: list[AnnotationRule], schema, binding: DomainBinding) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    parents = binding.type_parents()
    declared = {ROOT_TYPE} | set(parents)
    model_objects = binding.object_types()
    column_types = {r.column: r.template.strip().lower() for r in rules if r.kind == "object"}
    for i, rule in enumerate(rules):
        where = f"rules[{i}]"
        for col in [rule.column, *rule.placeholders()]:
            if col not in schema:
                out.append(error("template-column-missing", f"column {col!r} not in product data", where))
        if rule.kind == "object":
            if column_types[rule.column] not in declared:
                out.append(error("type-mismatch-in-rule", f"object type {rule.template!r} is not declared", where))
            continue
        try:
            lit, columns = _template_literal(rule)
        except DiagnosticError as exc:
            out.append(error("invalid-identifier", f"bad template: {exc.diagnostics[0].message}", where))
            continue
        if rule.kind == "init" and not lit.positive:
            out.append(error("invalid-identifier", "init templates must be positive", where))
        pred = binding.predicate(lit.predicate)
        if pred is None:
            out.append(error("unknown-predicate", f"template uses undeclared predicate {lit.predicate}", where))
            continue
        if pred.arity != len(lit.args):
            out.append(error("arity-mismatch", f"template has {len(lit.args)} arguments, expected {pred.arity}", where))
            continue
        for arg, (_, wanted) in zip(lit.args, pred.params):
            if arg in columns:
                have = column_types.get(columns[arg])
            else:
                have = model_objects.get(arg)
                if have is None:
                    out.append(error("unknown-object", f"template constant {arg} is not a model object", where))
                    continue
            if have is not None and wanted not in ancestors(have, parents):
                out.append(
                    error("type-mismatch-in-rule", f"{arg} yields {have} objects but {lit.predicate} wants {wanted}", where)
                )
    return out


def _unique(items) -> tuple:
    return tuple(dict.fromkeys(items))


def annotate_product(
    records: "ProductRecordSet", rules: list[AnnotationRule], binding: DomainBinding
) -> Annotations:
    """Instantiate every rule on every record.

    Values become lowercase PDDL names. Placeholder values that are not
    produced by an object rule must name an existing model object of a
    compatible type.
    """
    out = check_rules(rules, records.schema, binding)
    if out:
        raise DiagnosticError(out)
    parents = binding.type_parents()
    model_objects = binding.object_types()
    column_types = {r.column: r.template.strip().lower() for r in rules if r.kind == "object"}
    objects: list = []
    init: list[Literal] = []
    goal: list[Literal] = []
    parsed = {id(r): _template_literal(r) for r in rules if r.kind != "object"}
    for row in records.rows:
        where = f"row {row[records.key]}"
        values = {}
        for col in row:
            value = row[col].strip().lower()
            values[col] = value
        for rule in rules:
            if not values[rule.column]:
                continue
            if rule.kind == "object":
                name = values[rule.column]
                if not is_identifier(name):
                    out.append(error("invalid-identifier", f"{name!r} is not a legal PDDL name", where))
                else:
                    objects.append((name, column_types[rule.column]))
                continue
            lit, columns = parsed[id(rule)]
            binding_map = {var: values[col] for var, col in columns.items()}
            ground = lit.substitute(binding_map)
            pred = binding.predicate(lit.predicate)
            for arg, (_, wanted) in zip(lit.args, pred.params):
                if arg not in columns:
                    continue
                value = binding_map[arg]
                col = columns[arg]
                if not is_identifier(value):
                    out.append(error("invalid-identifier", f"{value!r} in column {col} is not a legal PDDL name", where))
                elif col not in column_types:
                    if value not in model_objects:
                        out.append(error("unknown-object", f"{value} in column {col} is not a model object", where))
                    elif wanted not in ancestors(model_objects[value], parents):
                        out.append(error("type-mismatch", f"{value} is a {model_objects[value]}, {lit.predicate} wants {wanted}", where))
            (init if rule.kind == "init" else goal).append(ground)
    if out:
        raise DiagnosticError(out)
    return Annotations(_unique(objects), _unique(init), _unique(goal))
