"""
How plans grow with the rivet list
==================================

Regenerate the problem for longer rivet lists. The domain never changes;
only objects, type atoms and goals are added.
"""

import time

from m2pddl.fixtures import SCOPE_ROOT, build_aircraft_fixture
from m2pddl.generator import PipelineConfig, generate_domain, generate_problem
from m2pddl.model import select_scope
from m2pddl.pddl import print_domain
from m2pddl.planner import ground, solve
from m2pddl.profile import annotate_product, bind_actions, bind_static

print(f"{'rivets':>6} {'types':>5} {'ground':>7} {'bfs':>4} {'greedy':>6} {'seconds':>8}")
domains = set()
for num_types in (1, 2):
    for num_rivets in (2, 4, 6, 8, 10):
        model, records, rules = build_aircraft_fixture(num_rivets, num_types)
        model = select_scope(model, SCOPE_ROOT)
        binding = bind_actions(model, bind_static(model))
        domain = generate_domain(binding)
        problem = generate_problem(binding, annotate_product(records, rules, binding), PipelineConfig("scale"))
        domains.add(print_domain(domain))

        start = time.perf_counter()
        task = ground(domain, problem)
        bfs = solve(task, "bfs")
        greedy = solve(task, "greedy-goalcount")
        took = time.perf_counter() - start
        print(f"{num_rivets:>6} {num_types:>5} {len(task.actions):>7} {bfs.cost:>4} {greedy.cost:>6} {took:>8.3f}")

# One domain for every instance.
print(f"distinct domain texts: {len(domains)}")
