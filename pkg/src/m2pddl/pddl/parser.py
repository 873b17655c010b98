"""Reader for the supported PDDL subset.

Parsing is purely syntactic: a problem that mentions an undeclared object
parses fine and is rejected later by :func:`validate_problem`.
Identifiers are case-insensitive and come back lowercased.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from ..diagnostics import Diagnostic, DiagnosticError, error, warning
from .syntax import REQUIREMENTS, ROOT_TYPE, ActionSchema, Literal, PddlDomain, PddlProblem, Predicate

_ATOM_CHARS = re.compile(r"[A-Za-z0-9_\-?:.]+")


@dataclass
class Token:
    text: str
    line: int
    col: int

    @property
    def where(self) -> str:
        return f"{self.line}:{self.col}"


@dataclass
class Node:
    items: list
    line: int
    col: int

    @property
    def where(self) -> str:
        return f"{self.line}:{self.col}"


Expr = Union[Token, Node]


class _Fail(Exception):
    def __init__(self, code: str, message: str, where: str):
        self.diagnostic = error(code, message, where)


def _tokenize(text: str) -> list[Token]:
    tokens = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        i = 0
        while i < len(line):
            ch = line[i]
            if ch == ";":
                break
            if ch.isspace():
                i += 1
            elif ch in "()":
                tokens.append(Token(ch, lineno, i + 1))
                i += 1
            else:
                m = _ATOM_CHARS.match(line, i)
                if not m:
                    raise _Fail("lexical-error", f"unexpected character {ch!r}", f"{lineno}:{i + 1}")
                tokens.append(Token(m.group().lower(), lineno, i + 1))
                i = m.end()
    return tokens


def _read(text: str) -> Node:
    tokens = _tokenize(text)
    if not tokens:
        raise _Fail("syntax-error", "empty input", "1:1")
    stack: list[Node] = []
    top: Optional[Node] = None
    for tok in tokens:
        if tok.text == "(":
            node = Node([], tok.line, tok.col)
            if stack:
                stack[-1].items.append(node)
            elif top is not None:
                raise _Fail("syntax-error", "text after the closing define", tok.where)
            stack.append(node)
        elif tok.text == ")":
            if not stack:
                raise _Fail("unbalanced-parentheses", "unmatched ')'", tok.where)
            top = stack.pop()
        else:
            if not stack:
                raise _Fail("syntax-error", f"{tok.text!r} outside any expression", tok.where)
            stack[-1].items.append(tok)
    if stack:
        raise _Fail("unbalanced-parentheses", "missing ')' for expression opened here", stack[0].where)
    return top


def _name(expr: Expr, what: str) -> str:
    if not isinstance(expr, Token) or expr.text.startswith((":", "?")):
        raise _Fail("syntax-error", f"expected {what}", expr.where)
    return expr.text


def _keyword(node: Node) -> Token:
    if not node.items or not isinstance(node.items[0], Token):
        raise _Fail("syntax-error", "expected a keyword-led expression", node.where)
    return node.items[0]


def _typed_list(items: list, where: str, variables: bool) -> list[tuple[str, str]]:
    """Parse ``a b - t c`` into [(a, t), (b, t), (c, object)]."""
    result: list[tuple[str, str]] = []
    pending: list[str] = []
    i = 0
    while i < len(items):
        item = items[i]
        if not isinstance(item, Token):
            raise _Fail("syntax-error", "nested expression in typed list (either is unsupported)", item.where)
        if item.text == "-":
            if not pending or i + 1 >= len(items):
                raise _Fail("syntax-error", "dangling '-' in typed list", item.where)
            type_ = _name(items[i + 1], "type name")
            result += [(n, type_) for n in pending]
            pending = []
            i += 2
            continue
        if variables != item.text.startswith("?"):
            kind = "variable" if variables else "name"
            raise _Fail("syntax-error", f"expected {kind}, got {item.text}", item.where)
        pending.append(item.text)
        i += 1
    result += [(n, ROOT_TYPE) for n in pending]
    return result


def _literal(expr: Expr) -> Literal:
    if not isinstance(expr, Node) or not expr.items:
        raise _Fail("syntax-error", "expected a literal", expr.where)
    head = expr.items[0]
    if isinstance(head, Token) and head.text == "not":
        if len(expr.items) != 2:
            raise _Fail("syntax-error", "not takes exactly one atom", expr.where)
        inner = _literal(expr.items[1])
        if not inner.positive:
            raise _Fail("syntax-error", "double negation", expr.where)
        return inner.negate()
    pred = _name(head, "predicate name")
    if pred in ("and", "or", "imply", "exists", "forall", "when"):
        raise _Fail("syntax-error", f"{pred} is not allowed here; only flat conjunctions of literals", expr.where)
    args = []
    for arg in expr.items[1:]:
        if not isinstance(arg, Token):
            raise _Fail("syntax-error", "nested term in literal", arg.where)
        args.append(arg.text)
    return Literal(pred, tuple(args))


def _conjunction(expr: Expr) -> tuple[Literal, ...]:
    if isinstance(expr, Node) and not expr.items:
        return ()
    if isinstance(expr, Node) and isinstance(expr.items[0], Token) and expr.items[0].text == "and":
        return tuple(_literal(e) for e in expr.items[1:])
    return (_literal(expr),)


def _requirements(node: Node) -> set[str]:
    reqs = set()
    for item in node.items[1:]:
        if not isinstance(item, Token):
            raise _Fail("syntax-error", "expected a requirement flag", item.where)
        flag = item.text
        if flag not in REQUIREMENTS:
            raise _Fail("unsupported-requirement", f"requirement {flag} is outside the supported subset", item.where)
        reqs.add(flag)
    return reqs


def _header(root: Node, kind: str) -> tuple[str, list]:
    items = root.items
    if len(items) < 2 or not isinstance(items[0], Token) or items[0].text != "define":
        raise _Fail("syntax-error", "expected (define ...)", root.where)
    head = items[1]
    if not isinstance(head, Node) or len(head.items) != 2 or _keyword(head).text != kind:
        raise _Fail("syntax-error", f"expected ({kind} <name>)", head.where)
    return _name(head.items[1], f"{kind} name"), items[2:]


def _action(node: Node) -> ActionSchema:
    items = node.items
    name = _name(items[1], "action name") if len(items) > 1 else None
    if name is None:
        raise _Fail("syntax-error", "action without a name", node.where)
    params: list = []
    pre: tuple = ()
    eff: tuple = ()
    seen = set()
    i = 2
    while i < len(items):
        key = items[i]
        if not isinstance(key, Token) or i + 1 >= len(items):
            raise _Fail("syntax-error", "expected :parameters/:precondition/:effect followed by a value", key.where)
        if key.text in seen:
            raise _Fail("syntax-error", f"{key.text} given twice", key.where)
        seen.add(key.text)
        value = items[i + 1]
        if key.text == ":parameters":
            if not isinstance(value, Node):
                raise _Fail("syntax-error", "parameters must be a list", value.where)
            params = _typed_list(value.items, value.where, variables=True)
        elif key.text == ":precondition":
            pre = _conjunction(value)
        elif key.text == ":effect":
            eff = _conjunction(value)
        else:
            raise _Fail("unknown-section", f"unsupported action field {key.text}", key.where)
        i += 2
    return ActionSchema(name, tuple(params), pre, eff)


def _run(fn, text: str, diagnostics: Optional[list[Diagnostic]]):
    try:
        return fn(_read(text), diagnostics if diagnostics is not None else [])
    except _Fail as fail:
        if diagnostics is not None:
            diagnostics.append(fail.diagnostic)
        raise DiagnosticError([fail.diagnostic]) from None


def _domain(root: Node, diagnostics: list[Diagnostic]) -> PddlDomain:
    name, sections = _header(root, "domain")
    reqs: set[str] = set()
    types: list = []
    predicates: list = []
    actions: list = []
    seen = set()
    for section in sections:
        if not isinstance(section, Node):
            raise _Fail("syntax-error", "expected a section", section.where)
        key = _keyword(section)
        if key.text in seen and key.text != ":action":
            raise _Fail("syntax-error", f"section {key.text} repeated", key.where)
        seen.add(key.text)
        if key.text == ":requirements":
            reqs = _requirements(section)
        elif key.text == ":types":
            types = _typed_list(section.items[1:], section.where, variables=False)
        elif key.text == ":predicates":
            for item in section.items[1:]:
                if not isinstance(item, Node) or not item.items:
                    raise _Fail("syntax-error", "expected a predicate declaration", item.where)
                pname = _name(item.items[0], "predicate name")
                predicates.append(Predicate(pname, tuple(_typed_list(item.items[1:], item.where, variables=True))))
        elif key.text == ":action":
            actions.append(_action(section))
        else:
            raise _Fail("unknown-section", f"section {key.text} is not supported", key.where)
    return PddlDomain(name, frozenset(reqs), tuple(types), tuple(predicates), tuple(actions))


def _problem(root: Node, diagnostics: list[Diagnostic]) -> PddlProblem:
    name, sections = _header(root, "problem")
    domain_name = None
    objects: list = []
    init: list[Literal] = []
    goal: tuple = ()
    seen = set()
    for section in sections:
        if not isinstance(section, Node):
            raise _Fail("syntax-error", "expected a section", section.where)
        key = _keyword(section)
        if key.text in seen:
            raise _Fail("syntax-error", f"section {key.text} repeated", key.where)
        seen.add(key.text)
        if key.text == ":domain":
            if len(section.items) != 2:
                raise _Fail("syntax-error", "(:domain <name>) expected", section.where)
            domain_name = _name(section.items[1], "domain name")
        elif key.text == ":requirements":
            _requirements(section)
        elif key.text == ":objects":
            objects = _typed_list(section.items[1:], section.where, variables=False)
        elif key.text == ":init":
            seen_atoms = set()
            for item in section.items[1:]:
                lit = _literal(item)
                if not lit.positive:
                    raise _Fail("syntax-error", "negative literal in :init", item.where)
                if lit in seen_atoms:
                    diagnostics.append(warning("duplicate-init-atom", f"{lit} listed more than once", item.where))
                seen_atoms.add(lit)
                init.append(lit)
        elif key.text == ":goal":
            if len(section.items) != 2:
                raise _Fail("syntax-error", "(:goal <condition>) expected", section.where)
            goal = _conjunction(section.items[1])
        else:
            raise _Fail("unknown-section", f"section {key.text} is not supported", key.where)
    if domain_name is None:
        raise _Fail("syntax-error", "problem lacks (:domain ...)", root.where)
    return PddlProblem(name, domain_name, tuple(objects), frozenset(init), goal)


def parse_domain(text: str, diagnostics: Optional[list[Diagnostic]] = None) -> PddlDomain:
    """Parse domain text.

    Raises :class:`DiagnosticError` on failure. When ``diagnostics`` is
    given, errors and warnings are also appended to it.
    """
    return _run(_domain, text, diagnostics)


def parse_problem(text: str, diagnostics: Optional[list[Diagnostic]] = None) -> PddlProblem:
    """Parse problem text; see :func:`parse_domain`.

    Duplicate ``:init`` atoms collapse to one and raise a
    ``duplicate-init-atom`` warning in ``diagnostics``.
    """
    return _run(_problem, text, diagnostics)


def parse_literal(text: str) -> Literal:
    """Parse a single literal such as ``(at ?r ?s)`` or ``(not (fastened r1))``."""
    try:
        return _literal(_read(text))
    except _Fail as fail:
        raise DiagnosticError([fail.diagnostic]) from None


def parse_params(text: str) -> list[tuple[str, str]]:
    """Parse a typed variable list such as ``?r - robot ?s - station``."""
    try:
        node = _read(f"({text})")
        return _typed_list(node.items, node.where, variables=True)
    except _Fail as fail:
        raise DiagnosticError([fail.diagnostic]) from None
