"""
Packing edge-disjoint Hamilton cycles in a 20-core
==================================================

Take an even factor of degree 2 k1, split it into k1 two-factors, and
turn each into a Hamilton cycle in turn while the later ones stay blocked.
"""

import math

from corelab import core_subgraph, graph_from_edges, pack_hamilton_cycles, verify_packing
from corelab.graph import ProcessSampler
from corelab.lab import core_budget_stream
from corelab.packing import k1_of, split_budget
from corelab.thresholds import compute_ck

n, k = 1000, 20
k1 = k1_of(k)
m = int(1.2 * compute_ck(k).c_k * n / 2)
sampler = ProcessSampler(n, seed=5)
core, mapping = core_subgraph(graph_from_edges(n, sampler.take(m)), k)
print(f"{m} edges, 20-core on {core.n} vertices, min degree {core.min_degree()}, k1 = {k1}")

stream = core_budget_stream(sampler, m, mapping, int(n / math.log(math.log(n))))
res = pack_hamilton_cycles(core, k, split_budget(stream, k1))

print(f"packed {res.succeeded} of {res.attempted} cycles, verified: {verify_packing(core, res)}")
print(f"backbone minimum degrees: {res.backbone_min_degrees}")
print(f"budget edges used per cycle: {res.per_cycle_budget_used}")
