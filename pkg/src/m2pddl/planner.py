"""Grounding, forward search and plan validation for the STRIPS subset."""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from math import prod
from typing import Optional, Sequence

from .diagnostics import DiagnosticError, error
from .pddl import Literal, PddlDomain, PddlProblem
from .pddl.syntax import ancestors

DEFAULT_GROUND_CAP = 10**6
DEFAULT_NODE_CAP = 10**6
STRATEGIES = ("bfs", "greedy-goalcount")


class PlanningError(Exception):
    pass


class Unsolvable(PlanningError):
    """Search exhausted the reachable state space without meeting the goal."""


class ResourceLimit(PlanningError):
    """Search stopped at the node expansion cap."""


@dataclass(frozen=True)
class GroundAction:
    name: str
    args: tuple[str, ...]
    pre_pos: frozenset[int]
    pre_neg: frozenset[int]
    add: frozenset[int]
    delete: frozenset[int]

    def applicable(self, state: frozenset[int]) -> bool:
        return self.pre_pos <= state and not (self.pre_neg & state)

    def apply(self, state: frozenset[int]) -> frozenset[int]:
        return (state - self.delete) | self.add

    def __str__(self) -> str:
        return "(" + " ".join((self.name, *self.args)) + ")"


@dataclass(frozen=True)
class GroundTask:
    atoms: tuple[Literal, ...]
    actions: tuple[GroundAction, ...]
    init: frozenset[int]
    goal: frozenset[int]
    goal_neg: frozenset[int] = frozenset()

    def is_goal(self, state: frozenset[int]) -> bool:
        return self.goal <= state and not (self.goal_neg & state)

    def goal_distance(self, state: frozenset[int]) -> int:
        return len(self.goal - state) + len(self.goal_neg & state)


@dataclass(frozen=True)
class Step:
    name: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        return "(" + " ".join((self.name, *self.args)) + ")"


@dataclass(frozen=True)
class Plan:
    steps: tuple[Step, ...] = ()

    @property
    def cost(self) -> int:
        return len(self.steps)

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class Verdict:
    valid: bool
    failure_step: Optional[int] = None
    reason: Optional[str] = None  # "precondition-violated" | "goal-not-reached"
    trace: tuple = field(default=(), compare=True)
    detail: str = ""


def candidates_by_type(domain: PddlDomain, problem: PddlProblem) -> dict[str, list[str]]:
    """Objects usable for each declared type, including subtype members."""
    parents = domain.type_parents()
    result: dict[str, list[str]] = {t: [] for t in domain.type_names()}
    for name, type_ in problem.objects:
        for sup in ancestors(type_, parents):
            result.setdefault(sup, []).append(name)
    return result


def ground(domain: PddlDomain, problem: PddlProblem, cap: int = DEFAULT_GROUND_CAP) -> GroundTask:
    """Instantiate every schema over all type-respecting argument tuples.

    No reachability pruning is done, so the ground action count is exactly
    the sum over schemas of the product of parameter domain sizes.
    """
    pools = candidates_by_type(domain, problem)
    total = sum(prod(len(pools.get(t, ())) for _, t in a.params) for a in domain.actions)
    if total > cap:
        raise DiagnosticError(
            [error("grounding-explosion", f"{total} ground actions exceed the cap of {cap}", problem.name)]
        )
    index: dict[Literal, int] = {}

    def ids(literals) -> frozenset[int]:
        return frozenset(index.setdefault(lit.atom, len(index)) for lit in literals)

    init = ids(sorted(problem.init))
    goal = ids(lit for lit in problem.goal if lit.positive)
    goal_neg = ids(lit for lit in problem.goal if not lit.positive)
    actions = []
    for schema in domain.actions:
        variables = [v for v, _ in schema.params]
        for combo in product(*(pools.get(t, ()) for _, t in schema.params)):
            sub = dict(zip(variables, combo))
            pre = [lit.substitute(sub) for lit in schema.precondition]
            eff = [lit.substitute(sub) for lit in schema.effect]
            add = ids(l for l in eff if l.positive)
            actions.append(
                GroundAction(
                    schema.name,
                    tuple(combo),
                    ids(l for l in pre if l.positive),
                    ids(l for l in pre if not l.positive),
                    add,
                    # delete-then-add: an atom both deleted and added stays true
                    ids(l for l in eff if not l.positive) - add,
                )
            )
    atoms = tuple(sorted(index, key=index.__getitem__))
    return GroundTask(atoms, tuple(actions), init, goal, goal_neg)


def _extract(parents: dict, state: frozenset[int], task: GroundTask) -> Plan:
    steps = []
    while parents[state] is not None:
        prev, action_index = parents[state]
        action = task.actions[action_index]
        steps.append(Step(action.name, action.args))
        state = prev
    return Plan(tuple(reversed(steps)))


def _bfs(task: GroundTask, node_cap: int) -> Plan:
    parents: dict = {task.init: None}
    queue = deque([task.init])
    expanded = 0
    while queue:
        state = queue.popleft()
        expanded += 1
        if expanded > node_cap:
            raise ResourceLimit(f"bfs exceeded {node_cap} expansions")
        for i, action in enumerate(task.actions):
            if not action.applicable(state):
                continue
            succ = action.apply(state)
            if succ in parents:
                continue
            parents[succ] = (state, i)
            if task.is_goal(succ):
                return _extract(parents, succ, task)
            queue.append(succ)
    raise Unsolvable(f"goal unreachable; {len(parents)} states explored")


def _greedy(task: GroundTask, node_cap: int) -> Plan:
    parents: dict = {task.init: None}
    counter = 0
    heap = [(task.goal_distance(task.init), counter, task.init)]
    expanded = 0
    while heap:
        _, _, state = heapq.heappop(heap)
        if task.is_goal(state):
            return _extract(parents, state, task)
        expanded += 1
        if expanded > node_cap:
            raise ResourceLimit(f"greedy search exceeded {node_cap} expansions")
        for i, action in enumerate(task.actions):
            if not action.applicable(state):
                continue
            succ = action.apply(state)
            if succ in parents:
                continue
            parents[succ] = (state, i)
            counter += 1
            heapq.heappush(heap, (task.goal_distance(succ), counter, succ))
    raise Unsolvable(f"goal unreachable; {len(parents)} states explored")


def solve(task: GroundTask, strategy: str = "bfs", node_cap: int = DEFAULT_NODE_CAP) -> Plan:
    """Search forward from the initial state.

    ``bfs`` returns a shortest plan; ``greedy-goalcount`` is best-first on
    the number of unsatisfied goal atoms. Successors are generated in
    ground-action order, so plans are reproducible. Raises
    :class:`Unsolvable` or :class:`ResourceLimit`.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    if task.is_goal(task.init):
        return Plan()
    if strategy == "bfs":
        return _bfs(task, node_cap)
    return _greedy(task, node_cap)


def _summary(state: set[Literal]) -> tuple[str, ...]:
    return tuple(sorted(str(a) for a in state))


def validate_plan(domain: PddlDomain, problem: PddlProblem, plan: Plan | Sequence[Step]) -> Verdict:
    """Simulate ``plan`` from the initial state, instantiating each step from its schema.

    A step naming an unknown action, or with arguments of the wrong number
    or type, counts as a violated precondition.
    """
    steps = plan.steps if isinstance(plan, Plan) else tuple(plan)
    objects = problem.object_types()
    parents = domain.type_parents()
    state = set(problem.init)
    trace = [_summary(state)]

    def fail(i, reason, detail):
        return Verdict(False, i, reason, tuple(trace), detail)

    for i, step in enumerate(steps):
        schema = domain.action(step.name)
        if schema is None:
            return fail(i, "precondition-violated", f"unknown action {step.name}")
        if len(step.args) != len(schema.params):
            return fail(i, "precondition-violated", f"{step} takes {len(schema.params)} arguments")
        for arg, (var, type_) in zip(step.args, schema.params):
            if arg not in objects or type_ not in ancestors(objects[arg], parents):
                return fail(i, "precondition-violated", f"{arg} is not a valid {type_} for {var}")
        sub = dict(zip((v for v, _ in schema.params), step.args))
        for lit in schema.precondition:
            atom = lit.substitute(sub).atom
            if (atom in state) != lit.positive:
                return fail(i, "precondition-violated", f"{step}: {lit.substitute(sub)} does not hold")
        effects = [lit.substitute(sub) for lit in schema.effect]
        state -= {l.atom for l in effects if not l.positive}
        state |= {l for l in effects if l.positive}
        trace.append(_summary(state))
    for lit in problem.goal:
        if (lit.atom in state) != lit.positive:
            return fail(len(steps), "goal-not-reached", f"{lit} does not hold in the final state")
    return Verdict(True, trace=tuple(trace))


def format_plan(plan: Plan) -> str:
    """One ``(action arg ...)`` line per step, newline-terminated."""
    return "".join(f"{step}\n" for step in plan.steps)


def parse_plan(text: str) -> Plan:
    """Read plan text; blank lines and ``;`` comments (e.g. cost lines) are skipped."""
    steps = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split(";", 1)[0].strip()
        if not line:
            continue
        if not (line.startswith("(") and line.endswith(")")):
            raise ValueError(f"line {lineno}: expected '(action arg ...)', got {line!r}")
        parts = line[1:-1].lower().split()
        if not parts:
            raise ValueError(f"line {lineno}: empty step")
        steps.append(Step(parts[0], tuple(parts[1:])))
    return Plan(tuple(steps))
