import random
from dataclasses import replace

import pytest

from m2pddl.diagnostics import DiagnosticError
from m2pddl.pddl import ActionSchema, Literal, PddlDomain, PddlProblem, Predicate
from m2pddl.planner import (
    Plan,
    ResourceLimit,
    Step,
    Unsolvable,
    format_plan,
    ground,
    parse_plan,
    solve,
    validate_plan,
)

import gen
import oracles


def _pair_domain():
    return PddlDomain(
        "d",
        frozenset({":strips", ":typing"}),
        (("a", "object"), ("b", "object")),
        (Predicate("linked", (("?x", "a"), ("?y", "b"))),),
        (ActionSchema("link", (("?x", "a"), ("?y", "b")), (), (Literal("linked", ("?x", "?y")),)),),
    )


# -- ground ----------------------------------------------------------------


def test_no_actions():
    dom = PddlDomain("d", predicates=(Predicate("p"),))
    prob = PddlProblem("p", "d", (), frozenset({Literal("p")}), (Literal("p"),))
    task = ground(dom, prob)
    assert task.actions == ()
    assert len(task.init) == 1 and len(task.goal) == 1


def test_three_by_two_is_six():
    prob = PddlProblem("p", "d", (("a1", "a"), ("a2", "a"), ("a3", "a"), ("b1", "b"), ("b2", "b")), frozenset(), ())
    task = ground(_pair_domain(), prob)
    assert len(task.actions) == 6 == oracles.brute_force_ground_count(_pair_domain(), prob)


def test_aircraft_ground_count(aircraft_task, manifest):
    domain, problem = aircraft_task
    assert len(ground(domain, problem).actions) == oracles.brute_force_ground_count(domain, problem)
    assert len(ground(domain, problem).actions) == manifest["expected"]["ground_action_count"]["value"]


def test_subtype_objects_fill_supertype_params():
    dom = replace(_pair_domain(), types=(("a", "object"), ("b", "object"), ("c", "b")))
    prob = PddlProblem("p", "d", (("a1", "a"), ("c1", "c")), frozenset(), ())
    assert [a.args for a in ground(dom, prob).actions] == [("a1", "c1")]


def test_grounding_cap():
    prob = PddlProblem("p", "d", (("a1", "a"), ("a2", "a"), ("b1", "b")), frozenset(), ())
    with pytest.raises(DiagnosticError) as exc:
        ground(_pair_domain(), prob, cap=1)
    assert exc.value.codes == ["grounding-explosion"]


def test_delete_then_add():
    dom = PddlDomain(
        "d",
        predicates=(Predicate("p"),),
        actions=(ActionSchema("toggle", (), (), (Literal("p", (), False), Literal("p"))),),
    )
    task = ground(dom, PddlProblem("p", "d", (), frozenset(), (Literal("p"),)))
    (action,) = task.actions
    assert action.apply(task.init) == task.goal


# -- solve -----------------------------------------------------------------


@pytest.mark.parametrize("strategy", ["bfs", "greedy-goalcount"])
def test_goal_already_true(strategy):
    dom = PddlDomain("d", predicates=(Predicate("p"),))
    prob = PddlProblem("p", "d", (), frozenset({Literal("p")}), (Literal("p"),))
    plan = solve(ground(dom, prob), strategy)
    assert plan == Plan() and plan.cost == 0


def test_single_rivet_matches_oracle():
    domain, problem = gen.aircraft_task(1, 1)
    plan = solve(ground(domain, problem), "bfs")
    assert plan.cost == oracles.shortest_plan_length(domain, problem) == 3
    assert [s.name for s in plan.steps] == ["move", "equip", "screw"]


def test_aircraft_bfs_length_matches_manifest(aircraft_task, manifest):
    domain, problem = aircraft_task
    assert solve(ground(domain, problem), "bfs").cost == manifest["expected"]["plan_length_bfs"]["value"]


@pytest.mark.parametrize("strategy", ["bfs", "greedy-goalcount"])
def test_unreachable_goal(strategy):
    dom = PddlDomain("d", predicates=(Predicate("p"), Predicate("q")), actions=(ActionSchema("a", (), (), (Literal("p"),)),))
    prob = PddlProblem("p", "d", (), frozenset(), (Literal("q"),))
    with pytest.raises(Unsolvable):
        solve(ground(dom, prob), strategy)


def test_node_cap(aircraft_task):
    with pytest.raises(ResourceLimit):
        solve(ground(*aircraft_task), "bfs", node_cap=3)


def test_unknown_strategy(aircraft_task):
    with pytest.raises(ValueError):
        solve(ground(*aircraft_task), "astar")


def test_solver_is_deterministic(aircraft_task):
    task = ground(*aircraft_task)
    assert solve(task, "bfs") == solve(task, "bfs")
    assert solve(task, "greedy-goalcount") == solve(task, "greedy-goalcount")


@pytest.mark.parametrize("seed", range(10))
def test_random_tasks_agree_with_oracle(seed):
    domain, problem, length = gen.random_solvable_task(random.Random(seed))
    task = ground(domain, problem)
    plan = solve(task, "bfs")
    assert plan.cost == length
    assert validate_plan(domain, problem, plan).valid
    assert validate_plan(domain, problem, solve(task, "greedy-goalcount")).valid


# -- validate_plan ---------------------------------------------------------


def test_empty_plan_on_satisfied_goal():
    dom = PddlDomain("d", predicates=(Predicate("p"),))
    prob = PddlProblem("p", "d", (), frozenset({Literal("p")}), (Literal("p"),))
    assert validate_plan(dom, prob, Plan()).valid


def test_solver_plan_validates_and_matches_oracle(aircraft_task):
    domain, problem = aircraft_task
    plan = solve(ground(domain, problem), "bfs")
    assert validate_plan(domain, problem, plan).valid
    assert oracles.simulate(domain, problem, [(s.name, s.args) for s in plan.steps]) == (True, None)


def test_screw_before_equip_is_rejected(aircraft_task):
    domain, problem = aircraft_task
    steps = list(solve(ground(domain, problem), "bfs").steps)
    i = next(i for i, s in enumerate(steps) if s.name == "screw")
    assert steps[i - 1].name == "equip"
    steps[i - 1], steps[i] = steps[i], steps[i - 1]
    verdict = validate_plan(domain, problem, steps)
    assert (verdict.valid, verdict.failure_step, verdict.reason) == (False, i - 1, "precondition-violated")


def test_truncated_plan_misses_goal(aircraft_task):
    domain, problem = aircraft_task
    steps = solve(ground(domain, problem), "bfs").steps[:-1]
    verdict = validate_plan(domain, problem, steps)
    assert (verdict.valid, verdict.failure_step, verdict.reason) == (False, len(steps), "goal-not-reached")


@pytest.mark.parametrize(
    "step, detail",
    [
        (Step("teleport", ("ur10",)), "unknown action"),
        (Step("move", ("ur10",)), "takes 3 arguments"),
        (Step("move", ("r1", "fuselage", "tool-rack")), "not a valid robot"),
    ],
)
def test_malformed_steps_are_precondition_violations(aircraft_task, step, detail):
    verdict = validate_plan(*aircraft_task, [step])
    assert (verdict.failure_step, verdict.reason) == (0, "precondition-violated")
    assert detail in verdict.detail


def test_trace_is_deterministic(aircraft_task):
    domain, problem = aircraft_task
    plan = solve(ground(domain, problem), "bfs")
    first = validate_plan(domain, problem, plan)
    assert first == validate_plan(domain, problem, plan)
    assert len(first.trace) == plan.cost + 1


def test_plan_text_round_trip(aircraft_task):
    plan = solve(ground(*aircraft_task), "bfs")
    assert parse_plan(format_plan(plan)) == plan
    assert parse_plan("; cost = 1\n(MOVE ur10 fuselage tool-rack)\n\n") == Plan((Step("move", ("ur10", "fuselage", "tool-rack")),))
    with pytest.raises(ValueError):
        parse_plan("move ur10\n")
