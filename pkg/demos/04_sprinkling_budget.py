"""
How many late edges land among settled vertices
===============================================

Compare the core at tau with the graph n / log log n steps earlier.  Core
vertices that already had k core neighbours back then are settled; the
late edges joining two settled vertices form the sprinkling budget J.
"""

import math
import random

from corelab import graph_from_edges, partition_future_core, run_to_core, verify_core_vertex_stability

n, k = 2000, 15
lln = math.log(math.log(n))
print(f"target: J >= n/(100 log log n) = {n / (100 * lln):.2f}\n")
print("seed   tau    |core|  |settled|  |unsettled|  J")
for seed in range(6):
    trace, sampler = run_to_core(n, k, seed)
    early = trace.tau - math.floor(n / lln)
    g = graph_from_edges(n, sampler.edges[: trace.tau])
    h = graph_from_edges(n, sampler.edges[:early])
    part = partition_future_core(g, h, k)
    print(f"{seed:4d}  {trace.tau:6d}  {len(part.core):6d}  {len(part.B):9d}  {len(part.C):11d}  {part.J:4d}")

# swapping the late settled edges for random settled pairs leaves the core alone
rng = random.Random(0)
B = sorted(part.B)
ok = all(verify_core_vertex_stability(g, h, k, [tuple(rng.sample(B, 2)) for _ in range(part.J)], part)
         for _ in range(50))
print(f"\ncore vertex set unchanged under 50 random re-insertions: {ok}")
