"""
What the plan validator reports
===============================

Take a good plan for the riveting cell and break it in a few ways.
"""

from m2pddl.fixtures import SCOPE_ROOT, build_aircraft_fixture
from m2pddl.generator import PipelineConfig, generate_domain, generate_problem
from m2pddl.model import select_scope
from m2pddl.planner import Plan, Step, ground, solve, validate_plan
from m2pddl.profile import annotate_product, bind_actions, bind_static

# Everything can also run in memory, without writing files.
model, records, rules = build_aircraft_fixture(4, 2)
model = select_scope(model, SCOPE_ROOT)
binding = bind_actions(model, bind_static(model))
domain = generate_domain(binding)
problem = generate_problem(binding, annotate_product(records, rules, binding), PipelineConfig("aircraft-4"))

steps = list(solve(ground(domain, problem), "bfs").steps)
for i, step in enumerate(steps):
    print(i, step)


def report(label, candidate):
    verdict = validate_plan(domain, problem, Plan(tuple(candidate)))
    if verdict.valid:
        print(f"{label:28s} VALID")
    else:
        print(f"{label:28s} step {verdict.failure_step}: {verdict.reason} ({verdict.detail})")


report("original", steps)

# Screw before the end-effector is on the arm.
swapped = steps[:]
swapped[1], swapped[2] = swapped[2], swapped[1]
report("screw before equip", swapped)

# Drop the last step: every step applies but one rivet stays loose.
report("last step dropped", steps[:-1])

# Hand the arm the wrong end-effector.
wrong = steps[:]
wrong[1] = Step(wrong[1].name, (wrong[1].args[0], "ee-b", wrong[1].args[2]))
report("wrong end-effector", wrong)

# A rivet is not a robot.
report("rivet as robot", [Step("move", ("r1", "fuselage", "tool-rack"))] + steps)
