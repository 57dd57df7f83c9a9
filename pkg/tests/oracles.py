"""Brute-force reference implementations, deliberately naive and independent
of the library's algorithms.  Only for tiny inputs."""

from __future__ import annotations

import itertools
from functools import lru_cache

from corelab.graph import Graph


def core_by_subsets(g: Graph, k: int) -> frozenset[int]:
    """Union of every vertex set inducing minimum degree >= k."""
    best: set[int] = set()
    adj = g.adjacency_sets()
    for mask in range(1, 1 << g.n):
        S = [v for v in range(g.n) if mask >> v & 1]
        Sset = set(S)
        if all(len(adj[v] & Sset) >= k for v in S):
            best |= Sset
    return frozenset(best)


def max_matching_size(g: Graph) -> int:
    edges = g.edges()

    @lru_cache(maxsize=None)
    def go(i: int, used: int) -> int:
        if i == len(edges):
            return 0
        u, v = edges[i]
        best = go(i + 1, used)
        if not (used >> u & 1 or used >> v & 1):
            best = max(best, 1 + go(i + 1, used | 1 << u | 1 << v))
        return best

    return go(0, 0)


def has_f_factor(g: Graph, f) -> bool:
    f = list(f)
    if sum(f) % 2:
        return False
    need = sum(f) // 2
    for S in itertools.combinations(g.edges(), need):
        d = [0] * g.n
        for u, v in S:
            d[u] += 1
            d[v] += 1
        if d == f:
            return True
    return False


def is_hamiltonian(g: Graph) -> bool:
    """Held-Karp over subsets containing vertex 0."""
    n = g.n
    if n < 3:
        return False
    adj = g.adjacency_sets()
    full = (1 << n) - 1
    # reach[mask] = bitset of end vertices v with a path 0 -> v covering mask
    reach = [0] * (1 << n)
    reach[1] = 1
    for mask in range(1, 1 << n):
        if not mask & 1 or not reach[mask]:
            continue
        ends = reach[mask]
        for v in range(n):
            if ends >> v & 1:
                for w in adj[v]:
                    if not mask >> w & 1:
                        reach[mask | 1 << w] |= 1 << w
    return any(reach[full] >> v & 1 and 0 in adj[v] for v in range(1, n))


def violates_expansion_naive(g: Graph, ratio: float, size_bound: int) -> bool:
    adj = g.adjacency
    for s in range(1, size_bound + 1):
        for X in itertools.combinations(range(g.n), s):
            Xs = set(X)
            boundary = set().union(*(adj[v] for v in X)) - Xs
            if len(boundary) < ratio * s:
                return True
    return False


def max_disjoint_cycles(g: Graph) -> int:
    """Exact maximum number of vertex-disjoint cycles.

    Some optimal packing uses chordless cycles only, so at a vertex v either
    v is unused or it lies on a chordless cycle of the packing; both branches
    are searched on each connected piece of the 2-core, memoised and cut
    off once the cycle-rank or vertex-count bound is met.
    """
    adj0 = g.adjacency_sets()

    def two_core(alive: set[int]) -> set[int]:
        alive = set(alive)
        stack = [v for v in alive if len(adj0[v] & alive) < 2]
        while stack:
            v = stack.pop()
            if v not in alive:
                continue
            alive.discard(v)
            for w in adj0[v] & alive:
                if len(adj0[w] & alive) < 2:
                    stack.append(w)
        return alive

    def rank(alive: set[int]) -> int:
        m = sum(len(adj0[v] & alive) for v in alive) // 2
        seen: set[int] = set()
        comps = 0
        for s in alive:
            if s in seen:
                continue
            comps += 1
            stack = [s]
            seen.add(s)
            while stack:
                v = stack.pop()
                for w in adj0[v] & alive:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        return m - len(alive) + comps

    def chordless_through(v: int, alive: set[int]):
        # paths v = p0, p1, ..., each new vertex adjacent to no earlier one
        # except its predecessor (and v when closing)
        out = []

        def grow(path: list[int], on: set[int]):
            last = path[-1]
            for w in adj0[last] & alive:
                if w in on:
                    continue
                inner = adj0[w] & on
                if len(path) >= 2 and v in inner and inner <= {last, v}:
                    out.append(path + [w])
                    continue
                if inner == {last}:
                    on.add(w)
                    path.append(w)
                    grow(path, on)
                    path.pop()
                    on.discard(w)

        grow([v], {v})
        return out

    def components(alive: set[int]) -> list[set[int]]:
        seen: set[int] = set()
        out = []
        for s in sorted(alive):
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                v = stack.pop()
                for w in adj0[v] & alive:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            out.append(comp)
        return out

    memo: dict[frozenset[int], int] = {}

    def solve(alive: set[int]) -> int:
        alive = two_core(alive)
        if not alive:
            return 0
        parts = components(alive)
        if len(parts) > 1:
            return sum(solve(p) for p in parts)
        key = frozenset(alive)
        if key in memo:
            return memo[key]
        cap = min(rank(alive), len(alive) // 3)
        v = min(alive, key=lambda x: (len(adj0[x] & alive), x))
        best = solve(alive - {v})
        cycles = sorted({frozenset(c) for c in chordless_through(v, alive)}, key=lambda c: (len(c), sorted(c)))
        for cyc in cycles:
            if best >= cap:
                break
            best = max(best, 1 + solve(alive - cyc))
        memo[key] = best
        return best

    return solve(set(range(g.n)))


def ck_dense_grid(k: int, lo: float, hi: float, step: float) -> float:
    """min over a grid of lam / P(Poisson(lam) >= k - 1), via scipy's survival function."""
    import numpy as np
    from scipy.stats import poisson

    lam = np.arange(lo, hi + step / 2, step)
    return float(np.min(lam / poisson.sf(k - 2, lam)))
