"""Seeded random generators for well-formed PDDL tasks and model documents."""

from __future__ import annotations

import random

from m2pddl.model import Element, ModelDocument, StereotypeApplication
from m2pddl.pddl import ActionSchema, Literal, PddlDomain, PddlProblem, Predicate
from m2pddl.pddl.syntax import REQUIREMENTS, ancestors

import oracles


def random_domain(rng: random.Random, max_types=5, max_predicates=5, max_actions=4, max_params=3) -> PddlDomain:
    types = []
    for i in range(rng.randint(0, max_types)):
        parent = rng.choice(["object"] + [t for t, _ in types])
        types.append((f"t{i}", parent))
    type_names = ["object"] + [t for t, _ in types]

    predicates = []
    for i in range(rng.randint(1, max_predicates)):
        arity = rng.randint(0, 3)
        predicates.append(Predicate(f"p{i}", tuple((f"?a{j}", rng.choice(type_names)) for j in range(arity))))

    actions = []
    for i in range(rng.randint(0, max_actions)):
        params = tuple((f"?x{j}", rng.choice(type_names)) for j in range(rng.randint(0, max_params)))
        variables = [v for v, _ in params]

        def lit(positive):
            usable = [p for p in predicates if p.arity == 0 or variables]
            if not usable:
                return None
            pred = rng.choice(usable)
            return Literal(pred.name, tuple(rng.choice(variables) for _ in range(pred.arity)), positive)

        pre = tuple(filter(None, (lit(rng.random() < 0.7) for _ in range(rng.randint(0, 3)))))
        effect: list[Literal] = []
        for _ in range(rng.randint(0, 3)):
            candidate = lit(rng.random() < 0.6)
            if candidate is not None and candidate.negate() not in effect:
                effect.append(candidate)
        actions.append(ActionSchema(f"act{i}", params, pre, tuple(effect)))

    reqs = {r for r in REQUIREMENTS if rng.random() < 0.7}
    return PddlDomain(f"dom{rng.randint(0, 99)}", frozenset(reqs), tuple(types), tuple(predicates), tuple(actions))


def _fitting(domain, objects, type_name):
    parents = domain.type_parents()
    return [o for o, t in objects if type_name in ancestors(t, parents)]


def random_ground_literal(rng, domain, objects, positive=True):
    for _ in range(20):
        pred = rng.choice(domain.predicates)
        pools = [_fitting(domain, objects, t) for _, t in pred.params]
        if all(pools):
            return Literal(pred.name, tuple(rng.choice(p) for p in pools), positive)
    return None


def random_problem(rng: random.Random, domain: PddlDomain, max_objects=6) -> PddlProblem:
    type_names = ["object"] + [t for t, _ in domain.types]
    objects = [(f"o{i}", rng.choice(type_names)) for i in range(rng.randint(0, max_objects))]
    init = {random_ground_literal(rng, domain, objects) for _ in range(rng.randint(0, 6))}
    goal = []
    for _ in range(rng.randint(0, 3)):
        lit = random_ground_literal(rng, domain, objects, rng.random() < 0.8)
        if lit is not None and lit not in goal and lit.negate() not in goal:
            goal.append(lit)
    return PddlProblem(f"prob{rng.randint(0, 99)}", domain.name, tuple(objects), frozenset(init - {None}), tuple(goal))


def random_solvable_task(rng: random.Random, max_states: int = 10_000):
    """``(domain, problem, oracle shortest length)`` with a goal reachable by a random walk."""
    while True:
        domain = random_domain(rng)
        problem = random_problem(rng, domain)
        actions = oracles.string_actions(domain, problem)
        start = {oracles._atom(l.predicate, l.args) for l in problem.init}
        state = set(start)
        for _ in range(rng.randint(1, 8)):
            applicable = [a for a in actions if oracles._holds(state, a[1])]
            if not applicable:
                break
            state = set(oracles._apply(state, rng.choice(applicable)[2]))
        # prefer atoms the walk changed so most tasks need a non-empty plan
        changed = [(a, True) for a in sorted(state - start)] + [(a, False) for a in sorted(start - state)]
        if not changed and rng.random() < 0.9:
            continue
        pool = changed + [(a, True) for a in sorted(state & start)]
        if not pool:
            continue
        goal = []
        for atom, positive in rng.sample(pool, k=min(len(pool), rng.randint(1, 4))):
            pred, *args = atom.split()
            goal.append(Literal(pred, tuple(args), positive))
        problem = PddlProblem(problem.name, problem.domain_name, problem.objects, problem.init, tuple(goal))
        try:
            length = oracles.shortest_plan_length(domain, problem, max_states)
        except RuntimeError:
            continue
        if length is not None and (length >= 2 or rng.random() < 0.15):
            return domain, problem, length


def model_from_task(domain: PddlDomain, problem: PddlProblem | None = None) -> ModelDocument:
    """Encode a task as a profile-conformant model document."""

    def st(stereotype, **tags):
        return (StereotypeApplication(stereotype, tags),)

    root = "system"
    els = [Element(root, "block", "System", st("pddl-domain", name=domain.name))]
    for name, parent in domain.types:
        els.append(Element(f"type-{name}", "block", name, st("pddl-type", name=name, parent=parent), root))
    for pred in domain.predicates:
        params = " ".join(f"{v} - {t}" for v, t in pred.params)
        els.append(Element(f"pred-{pred.name}", "constraint", pred.name, st("pddl-predicate", name=pred.name, params=params), root))
    for act in domain.actions:
        aid = f"act-{act.name}"
        els.append(Element(aid, "activity", act.name, st("pddl-action", name=act.name), root))
        for var, type_ in act.params:
            els.append(Element(f"{aid}-{var[1:]}", "value", var, st("pddl-parameter", name=var, type=type_), aid))
        for i, lit in enumerate(act.precondition):
            els.append(Element(f"{aid}-pre{i}", "constraint", str(lit), st("pddl-precondition", literal=str(lit)), aid))
        for i, lit in enumerate(act.effect):
            els.append(Element(f"{aid}-eff{i}", "constraint", str(lit), st("pddl-effect", literal=str(lit)), aid))
    if problem is not None:
        for name, type_ in problem.objects:
            els.append(Element(f"obj-{name}", "part", name, st("pddl-object", name=name, type=type_), root))
        for i, lit in enumerate(sorted(problem.init)):
            els.append(Element(f"init{i}", "constraint", str(lit), st("pddl-init", literal=str(lit)), root))
        for i, lit in enumerate(problem.goal):
            els.append(Element(f"goal{i}", "constraint", str(lit), st("pddl-goal", literal=str(lit)), root))
    return ModelDocument("random", tuple(els), ())


def aircraft_task(num_rivets: int, num_types: int):
    """Parsed-equivalent ``(domain, problem)`` for an aircraft fixture, built in memory."""
    from m2pddl.fixtures import SCOPE_ROOT, build_aircraft_fixture
    from m2pddl.generator import PipelineConfig, generate_domain, generate_problem
    from m2pddl.model import select_scope
    from m2pddl.profile import annotate_product, bind_actions, bind_static

    model, records, rules = build_aircraft_fixture(num_rivets, num_types)
    model = select_scope(model, SCOPE_ROOT)
    binding = bind_actions(model, bind_static(model))
    annotations = annotate_product(records, rules, binding)
    name = f"aircraft-{num_rivets}"
    return generate_domain(binding), generate_problem(binding, annotations, PipelineConfig(name))
