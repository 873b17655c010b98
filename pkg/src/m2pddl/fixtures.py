"""Aircraft-assembly fixtures: a robot screwing collars onto rivets.

Each rivet type needs its matching end-effector. The system model holds
the domain vocabulary and the cell layout; the product data lists rivets.
"""

from __future__ import annotations

import json
from pathlib import Path

from .model import Element, ModelDocument, Relation, StereotypeApplication, save_model
from .product import ProductRecordSet, dump_product_data
from .profile import AnnotationRule, dump_rules

END_EFFECTOR_SUFFIXES = ("a", "b")
SCOPE_ROOT = "fuselage-cell"

_TYPES = ("robot", "end-effector", "rivet", "rivet-type", "station")
_PREDICATES = (
    ("at", "?o - object ?s - station"),
    ("equipped", "?r - robot ?e - end-effector"),
    ("hand-empty", "?r - robot"),
    ("fastened", "?v - rivet"),
    ("rivet-has-type", "?v - rivet ?t - rivet-type"),
    ("ee-matches-type", "?e - end-effector ?t - rivet-type"),
)
_ACTIONS = (
    (
        "move",
        (("r", "robot"), ("from", "station"), ("to", "station")),
        ("(at ?r ?from)",),
        ("(not (at ?r ?from))", "(at ?r ?to)"),
    ),
    (
        "equip",
        (("r", "robot"), ("e", "end-effector"), ("s", "station")),
        ("(at ?r ?s)", "(at ?e ?s)", "(hand-empty ?r)"),
        ("(not (at ?e ?s))", "(not (hand-empty ?r))", "(equipped ?r ?e)"),
    ),
    (
        "unequip",
        (("r", "robot"), ("e", "end-effector"), ("s", "station")),
        ("(at ?r ?s)", "(equipped ?r ?e)"),
        ("(not (equipped ?r ?e))", "(hand-empty ?r)", "(at ?e ?s)"),
    ),
    (
        "screw",
        (("r", "robot"), ("e", "end-effector"), ("v", "rivet"), ("t", "rivet-type")),
        ("(equipped ?r ?e)", "(rivet-has-type ?v ?t)", "(ee-matches-type ?e ?t)", "(not (fastened ?v))"),
        ("(fastened ?v)",),
    ),
)


def _st(stereotype: str, **tags: str) -> tuple[StereotypeApplication, ...]:
    return (StereotypeApplication(stereotype, dict(tags)),)


def _model(num_types: int) -> ModelDocument:
    cell = SCOPE_ROOT
    els = [
        Element("aircraft-plant", "block", "Aircraft Structure Assembly Plant"),
        Element(cell, "block", "Fuselage Riveting Cell", _st("pddl-domain", name="aircraft"), "aircraft-plant"),
        Element("wing-cell", "block", "Wing Assembly Cell", (), "aircraft-plant"),
        Element("wing-jig", "part", "Wing Jig", (), "wing-cell"),
    ]
    for t in _TYPES:
        els.append(Element(f"type-{t}", "block", t.replace("-", " ").title(), _st("pddl-type", name=t), cell))
    for name, params in _PREDICATES:
        els.append(Element(f"pred-{name}", "constraint", name, _st("pddl-predicate", name=name, params=params), cell))

    suffixes = END_EFFECTOR_SUFFIXES[:num_types]
    els.append(Element("ur10", "part", "UR10 Robotic Arm", _st("pddl-object", name="ur10", type="robot"), cell))
    for s in suffixes:
        els.append(Element(f"ee-{s}", "part", f"End-Effector {s.upper()}", _st("pddl-object", name=f"ee-{s}", type="end-effector"), cell))
    for s in suffixes:
        els.append(Element(f"rivet-type-{s}", "block", f"Rivet Type {s.upper()}", _st("pddl-object", name=f"type-{s}", type="rivet-type"), cell))
    for station in ("fuselage", "tool-rack"):
        els.append(Element(f"station-{station}", "part", station.title(), _st("pddl-object", name=station, type="station"), cell))

    for name, params, pre, eff in _ACTIONS:
        act = f"act-{name}"
        els.append(Element(act, "activity", name.title(), _st("pddl-action", name=name), cell))
        for var, type_ in params:
            els.append(Element(f"{act}-p-{var}", "value", var, _st("pddl-parameter", name=f"?{var}", type=type_), act))
        for i, lit in enumerate(pre):
            els.append(Element(f"{act}-pre-{i}", "constraint", lit, _st("pddl-precondition", literal=lit), act))
        for i, lit in enumerate(eff):
            els.append(Element(f"{act}-eff-{i}", "constraint", lit, _st("pddl-effect", literal=lit), act))

    init = ["(at ur10 fuselage)", "(hand-empty ur10)"]
    for s in suffixes:
        init += [f"(at ee-{s} tool-rack)", f"(ee-matches-type ee-{s} type-{s})"]
    for i, lit in enumerate(init):
        els.append(Element(f"init-{i}", "constraint", lit, _st("pddl-init", literal=lit), cell))

    rels = [Relation(f"alloc-{name}", "allocation", f"act-{name}", "ur10") for name, *_ in _ACTIONS]
    rels += [Relation(f"assoc-ee-{s}", "association", "ur10", f"ee-{s}") for s in suffixes]
    rels.append(Relation("assoc-wing-jig", "association", "wing-jig", "ur10"))
    return ModelDocument("Aircraft Structure Assembly", tuple(els), tuple(rels))


def aircraft_rules() -> list[AnnotationRule]:
    return [
        AnnotationRule("id", "object", "rivet"),
        AnnotationRule("rivet-type", "init", "(rivet-has-type <id> <rivet-type>)"),
        AnnotationRule("id", "goal", "(fastened <id>)"),
    ]


def rivet_row(index: int, num_types: int) -> dict:
    """Product row for the 1-based ``index``-th rivet; types assigned round-robin."""
    suffix = END_EFFECTOR_SUFFIXES[(index - 1) % num_types]
    return {"id": f"r{index}", "frame-position": f"frame-{10 + index}", "rivet-type": f"type-{suffix}"}


def build_aircraft_fixture(num_rivets: int, num_types: int):
    """Return ``(ModelDocument, ProductRecordSet, rules)`` for the riveting cell."""
    if num_types < 1 or num_rivets < 1:
        raise ValueError("need at least one rivet and one rivet type")
    if num_types > num_rivets:
        raise ValueError(f"num_types ({num_types}) cannot exceed num_rivets ({num_rivets})")
    if num_types > len(END_EFFECTOR_SUFFIXES):
        raise ValueError(f"only {len(END_EFFECTOR_SUFFIXES)} end-effectors are available")
    rows = tuple(rivet_row(i, num_types) for i in range(1, num_rivets + 1))
    records = ProductRecordSet(("id", "frame-position", "rivet-type"), rows, "id")
    return _model(num_types), records, aircraft_rules()


def write_aircraft_fixture(directory, num_rivets: int, num_types: int) -> dict[str, Path]:
    """Write model, product data and rules files; returns their paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    model, records, rules = build_aircraft_fixture(num_rivets, num_types)
    paths = {
        "model": directory / "aircraft.sysmodel",
        "product": directory / f"rivets-{num_rivets}.csv",
        "rules": directory / "aircraft.rules",
    }
    paths["model"].write_text(save_model(model), encoding="utf-8")
    paths["product"].write_text(dump_product_data(records), encoding="utf-8")
    paths["rules"].write_text(dump_rules(rules), encoding="utf-8")
    return paths


def load_manifest(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
