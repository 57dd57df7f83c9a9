"""
A Hamilton cycle in the core at the moment it appears
=====================================================

Two near-perfect matchings give a path plus a few cycles covering the
core.  Posa rotations then absorb the cycles one at a time, drawing on the
next process edges whenever they get stuck.
"""

from corelab import (SprinkleBudget, core_subgraph, graph_from_edges, hamiltonicity_solve,
                     rotate_extend, run_to_core, sprinkle_to_hamilton, two_factor_via_matchings)
from corelab.lab import core_budget_stream

n, k = 2000, 15
trace, sampler = run_to_core(n, k, seed=7)
core, mapping = core_subgraph(graph_from_edges(n, sampler.edges[: trace.tau]), k)
print(f"tau_15 = {trace.tau}, core has {core.n} vertices and min degree {core.min_degree()}")

factor = two_factor_via_matchings(core)
sizes = sorted((len(c) for c in factor.cycles), reverse=True)
print(f"two matchings: path on {len(factor.path)} vertices, {len(sizes)} cycles, largest {sizes[:5]}")

# one rotation round from the longest cycle opened into a path
longest = max(factor.cycles, key=len)
out = rotate_extend(core, longest[1:] + longest[:1])
print(f"rotating a path on {len(longest)} vertices: {out.kind} after {out.rotations} rotations")

# sprinkle the edges that arrive after tau, restricted to the core
stream = core_budget_stream(sampler, trace.tau, mapping, 400)
res = sprinkle_to_hamilton(core, factor, SprinkleBudget(stream))
print(f"sprinkling: {res.status}, {res.consumed} edges revealed, {res.boosters_hit} boosters hit")

# the restart heuristic uses only the core's own edges
ham = hamiltonicity_solve(core, seed=7)
print(f"hamiltonicity_solve: {ham.status} after {ham.restarts} restarts, {ham.rotations} rotations")
