"""
The k-core of the random graph process appears all at once
==========================================================

Run one process on n vertices, find the first step at which a 15-core
exists, and watch its size on either side of that step.
"""

import numpy as np

from corelab import compute_ck, hitting_time, peel_core, sample_process

# the threshold density c_k: edges ~ c_k n / 2 when the k-core is born
for k in (3, 5, 10, 15, 20, 30):
    r = compute_ck(k)
    print(f"k = {k:2d}   c_k = {r.c_k:8.4f}   minimiser lambda = {r.lambda_star:8.4f}")

n, k = 5000, 15
c15 = compute_ck(k).c_k
seq = sample_process(n, int(1.3 * c15 * n / 2), seed=1)

trace = hitting_time(seq, k)
print(f"\ntau_15 = {trace.tau}   predicted c_15 n/2 = {c15 * n / 2:.0f}")
print(f"core size at tau: {trace.core_size_at_tau} of {n} vertices")

# nothing one step earlier, most of the graph one step later
for dt in (-50, -1, 0, 50, 500):
    t = trace.tau + dt
    print(f"t = tau {dt:+5d}: |core| = {len(peel_core(seq.graph(t), k))}")

# concentration of tau / n over a handful of seeds
taus = []
for s in range(8):
    taus.append(hitting_time(sample_process(n, int(1.3 * c15 * n / 2), seed=100 + s), k).tau)
taus = np.array(taus) / n
print(f"\ntau/n over 8 seeds: mean {taus.mean():.4f}, sd {taus.std(ddof=1):.4f}, c_15/2 = {c15 / 2:.4f}")
