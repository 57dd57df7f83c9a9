"""
Degrees inside the newborn core
===============================

The degree of a core vertex is close to a Poisson variable conditioned to
be at least k.  Fit the mean by maximum likelihood and compare.
"""

import numpy as np

from corelab import core_subgraph, fit_truncated_poisson, graph_from_edges, run_to_core

n, k = 20000, 15
trace, sampler = run_to_core(n, k, seed=3)
core, _ = core_subgraph(graph_from_edges(n, sampler.edges[: trace.tau]), k)

degrees = core.degrees()
values, counts = np.unique(degrees, return_counts=True)
fit = fit_truncated_poisson(dict(zip(values.tolist(), counts.tolist())), k)

print(f"core at tau_15: {core.n} vertices, {core.m} edges, mean degree {degrees.mean():.3f}")
print(f"fitted mu = {fit.mu_hat:.3f}, total variation distance {fit.tv_distance:.4f}\n")

# fit.fitted[i] is the model mass at degree k + i
print(" deg   empirical   model")
for d in range(k, k + 16):
    emp = counts[values == d].sum() / counts.sum()
    print(f"{d:4d}   {emp:9.4f}   {fit.fitted[d - k]:6.4f}")
