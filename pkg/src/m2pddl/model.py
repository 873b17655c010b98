"""System-model exchange documents: loading, scoping and element selection.

A ``.sysmodel`` file is JSON with the normative layout::

    {"model": "...",
     "elements": [{"id", "kind", "name", "owner"?, "stereotypes": [{"name", "tags": {}}]}],
     "relations": [{"id", "kind", "source", "target"}]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .diagnostics import Diagnostic, DiagnosticError, error
from .profile import CATALOG

ELEMENT_KINDS = ("block", "part", "port", "activity", "constraint", "value")
RELATION_KINDS = ("containment", "association", "allocation", "dependency")


@dataclass(frozen=True)
class StereotypeApplication:
    name: str
    tags: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Element:
    id: str
    kind: str
    name: str
    stereotypes: tuple[StereotypeApplication, ...] = ()
    owner: Optional[str] = None

    def stereotype(self, name: str) -> Optional[StereotypeApplication]:
        for st in self.stereotypes:
            if st.name == name:
                return st
        return None


@dataclass(frozen=True)
class Relation:
    id: str
    kind: str
    source: str
    target: str


@dataclass(frozen=True)
class ModelDocument:
    name: str
    elements: tuple[Element, ...] = ()
    relations: tuple[Relation, ...] = ()

    def element(self, element_id: str) -> Optional[Element]:
        for el in self.elements:
            if el.id == element_id:
                return el
        return None

    def children(self) -> dict[str, list[str]]:
        """Containment edges from both ``owner`` fields and containment relations."""
        kids: dict[str, list[str]] = {}
        for el in self.elements:
            if el.owner is not None:
                kids.setdefault(el.owner, []).append(el.id)
        for rel in self.relations:
            if rel.kind == "containment":
                kids.setdefault(rel.source, []).append(rel.target)
        return kids

    def owned_by(self, owner_id: str) -> list[Element]:
        return [el for el in self.elements if el.owner == owner_id]


def _malformed(message: str, where: str = "") -> DiagnosticError:
    return DiagnosticError([error("malformed-document", message, where)])


def _text_field(record: dict, key: str, where: str, optional: bool = False):
    value = record.get(key)
    if value is None and optional:
        return None
    if not isinstance(value, str):
        raise _malformed(f"field {key!r} must be a string", where)
    return value


def _stereotype(raw, where: str) -> StereotypeApplication:
    if not isinstance(raw, dict):
        raise _malformed("stereotype must be an object", where)
    name = _text_field(raw, "name", where)
    tags = raw.get("tags", {})
    if not isinstance(tags, dict) or not all(isinstance(v, str) for v in tags.values()):
        raise _malformed("tags must map names to strings", where)
    return StereotypeApplication(name, dict(tags))


def _element(raw, index: int) -> Element:
    where = f"elements[{index}]"
    if not isinstance(raw, dict):
        raise _malformed("element must be an object", where)
    el_id = _text_field(raw, "id", where)
    where = el_id
    kind = _text_field(raw, "kind", where)
    if kind not in ELEMENT_KINDS:
        raise _malformed(f"element kind {kind!r} not in {ELEMENT_KINDS}", where)
    stereotypes = raw.get("stereotypes", [])
    if not isinstance(stereotypes, list):
        raise _malformed("stereotypes must be a list", where)
    return Element(
        id=el_id,
        kind=kind,
        name=_text_field(raw, "name", where),
        stereotypes=tuple(_stereotype(s, where) for s in stereotypes),
        owner=_text_field(raw, "owner", where, optional=True),
    )


def _relation(raw, index: int) -> Relation:
    where = f"relations[{index}]"
    if not isinstance(raw, dict):
        raise _malformed("relation must be an object", where)
    rel = Relation(*(_text_field(raw, key, where) for key in ("id", "kind", "source", "target")))
    if rel.kind not in RELATION_KINDS:
        raise _malformed(f"relation kind {rel.kind!r} not in {RELATION_KINDS}", rel.id)
    if rel.kind == "dependency" and rel.source == rel.target:
        raise _malformed("dependency relation points at its own source", rel.id)
    return rel


def _find_cycle(doc: ModelDocument) -> Optional[list[str]]:
    kids = doc.children()
    state: dict[str, int] = {}  # 1 = on stack, 2 = finished
    for start in [el.id for el in doc.elements]:
        if start in state:
            continue
        stack = [(start, iter(kids.get(start, ())))]
        path = [start]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                path.pop()
                state[node] = 2
            elif state.get(nxt) == 1:
                return path[path.index(nxt):]
            elif nxt not in state:
                state[nxt] = 1
                path.append(nxt)
                stack.append((nxt, iter(kids.get(nxt, ()))))
    return None


def check_model(doc: ModelDocument) -> list[Diagnostic]:
    """Structural invariants: unique ids, resolvable references, acyclic containment."""
    out = []
    ids: set[str] = set()
    for el in doc.elements:
        if el.id in ids:
            out.append(error("duplicate-element-id", f"element id {el.id} used twice", el.id))
        ids.add(el.id)
    for el in doc.elements:
        if el.owner is not None and el.owner not in ids:
            out.append(error("dangling-relation", f"owner {el.owner} of {el.id} does not exist", el.id))
    for rel in doc.relations:
        for end in (rel.source, rel.target):
            if end not in ids:
                out.append(error("dangling-relation", f"relation {rel.id} references missing element {end}", rel.id))
    if not out:
        cycle = _find_cycle(doc)
        if cycle:
            out.append(error("containment-cycle", "containment cycle " + " -> ".join(cycle + cycle[:1]), cycle[0]))
    return out


def load_model(text: str) -> ModelDocument:
    """Parse and structurally check a model document.

    Raises :class:`DiagnosticError` with element ids as locations.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _malformed(exc.msg, f"{exc.lineno}:{exc.colno}") from None
    if not isinstance(raw, dict):
        raise _malformed("top level must be an object")
    name = _text_field(raw, "model", "model")
    elements = raw.get("elements", [])
    relations = raw.get("relations", [])
    if not isinstance(elements, list) or not isinstance(relations, list):
        raise _malformed("elements and relations must be lists")
    doc = ModelDocument(
        name,
        tuple(_element(e, i) for i, e in enumerate(elements)),
        tuple(_relation(r, i) for i, r in enumerate(relations)),
    )
    problems = check_model(doc)
    if problems:
        raise DiagnosticError(problems)
    return doc


def save_model(doc: ModelDocument) -> str:
    elements = []
    for el in doc.elements:
        record = {"id": el.id, "kind": el.kind, "name": el.name}
        if el.owner is not None:
            record["owner"] = el.owner
        record["stereotypes"] = [{"name": st.name, "tags": dict(st.tags)} for st in el.stereotypes]
        elements.append(record)
    relations = [{"id": r.id, "kind": r.kind, "source": r.source, "target": r.target} for r in doc.relations]
    return json.dumps({"model": doc.name, "elements": elements, "relations": relations}, indent=2) + "\n"


def select_scope(model: ModelDocument, root: str) -> ModelDocument:
    """Restrict ``model`` to the containment closure of ``root``.

    Only containment is followed, never associations. Relations survive
    when both endpoints are inside; the root loses its outside owner.
    """
    if model.element(root) is None:
        raise DiagnosticError([error("unknown-root", f"scope root {root} is not in the model", root)])
    kids = model.children()
    inside = {root}
    frontier = [root]
    while frontier:
        node = frontier.pop()
        for child in kids.get(node, ()):
            if child not in inside:
                inside.add(child)
                frontier.append(child)
    elements = []
    for el in model.elements:
        if el.id not in inside:
            continue
        if el.owner is not None and el.owner not in inside:
            el = Element(el.id, el.kind, el.name, el.stereotypes, None)
        elements.append(el)
    relations = tuple(r for r in model.relations if r.source in inside and r.target in inside)
    return ModelDocument(model.name, tuple(elements), relations)


def identify_relevant(model: ModelDocument, catalog=CATALOG) -> list[str]:
    """Ids of elements carrying at least one profile stereotype, in document order."""
    return [el.id for el in model.elements if any(st.name in catalog for st in el.stereotypes)]
