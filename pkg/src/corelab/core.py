"""k-cores: batch peeling, incremental maintenance and the hitting time tau_k."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graph import Edge, EdgeSequence, Graph, ProcessSampler, pair_count

# Regime in which the Hamiltonicity results apply; smaller k is accepted but flagged.
MIN_REGIME_K = 3


def _peel(n: int, adjacency: Sequence[Sequence[int]], k: int) -> list[bool]:
    """Alive flags of the k-core, peeling a FIFO worklist seeded in index order."""
    deg = [len(a) for a in adjacency]
    alive = [True] * n
    queue = deque(v for v in range(n) if deg[v] < k)
    for v in queue:
        alive[v] = False
    while queue:
        v = queue.popleft()
        for w in adjacency[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] < k:
                    alive[w] = False
                    queue.append(w)
    return alive


def _csr(n: int, edges: np.ndarray) -> list[list[int]]:
    """Adjacency lists of an (m, 2) edge array, built through numpy sorting."""
    if len(edges) == 0:
        return [[] for _ in range(n)]
    src = np.concatenate((edges[:, 0], edges[:, 1]))
    dst = np.concatenate((edges[:, 1], edges[:, 0]))
    order = np.argsort(src, kind="stable")
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=ptr[1:])
    flat = dst[order].tolist()
    p = ptr.tolist()
    return [flat[p[v]:p[v + 1]] for v in range(n)]


def peel_core(g: Graph, k: int) -> frozenset[int]:
    """Vertex set of the k-core: the largest set inducing minimum degree >= k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    alive = _peel(g.n, g.adjacency, k)
    return frozenset(v for v in range(g.n) if alive[v])


def core_subgraph(g: Graph, k: int) -> tuple[Graph, list[int]]:
    """Induced subgraph on the k-core and the map from its labels back to ``g``."""
    return g.induced_subgraph(peel_core(g, k))


def _prefix_alive(n: int, arr: np.ndarray, t: int, k: int) -> list[bool]:
    return _peel(n, _csr(n, arr[:t]), k)


class CoreState:
    """k-core of a growing graph.

    ``core_deg[v]`` counts the alive neighbours of every vertex (alive or not).
    An inserted edge can only enlarge the core, and every new core vertex is
    reachable from a non-core endpoint of the edge through non-core vertices
    of total degree >= k; the insert therefore peels just that region and
    falls back to a full peel when the region exceeds ``n/4`` vertices.
    """

    def __init__(self, n: int, k: int, edges: Iterable[Edge] = ()):
        self.n = n
        self.k = k
        self.adjacency: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            self.adjacency[u].append(v)
            self.adjacency[v].append(u)
        self.full_peels = 0
        self.local_peels = 0
        self._full_peel()

    @classmethod
    def from_alive(cls, n: int, k: int, adjacency: list[list[int]], alive: list[bool]) -> "CoreState":
        state = cls.__new__(cls)
        state.n, state.k = n, k
        state.adjacency = adjacency
        state.full_peels = state.local_peels = 0
        state._set_alive(alive)
        return state

    def _full_peel(self) -> None:
        self.full_peels += 1
        self._set_alive(_peel(self.n, self.adjacency, self.k))

    def _set_alive(self, alive: list[bool]) -> None:
        self.alive = alive
        adj = self.adjacency
        self.core_deg = [sum(1 for w in adj[v] if alive[w]) for v in range(self.n)]
        self.core_size = sum(alive)
        self.core_edges = sum(self.core_deg[v] for v in range(self.n) if alive[v]) // 2

    def vertices(self) -> frozenset[int]:
        return frozenset(v for v in range(self.n) if self.alive[v])

    def add_edge(self, u: int, v: int) -> list[int]:
        """Insert edge ``uv``; returns the vertices that joined the core."""
        adj, alive, k = self.adjacency, self.alive, self.k
        adj[u].append(v)
        adj[v].append(u)
        if alive[u]:
            self.core_deg[v] += 1
        if alive[v]:
            self.core_deg[u] += 1
        if alive[u] and alive[v]:
            self.core_edges += 1
            return []
        roots = [x for x in (u, v) if not alive[x]]
        # Both endpoints must end up in the core for the edge to matter.
        if any(len(adj[x]) < k for x in roots):
            return []
        region = set(roots)
        stack = list(roots)
        limit = self.n // 4
        while stack:
            x = stack.pop()
            for w in adj[x]:
                if not alive[w] and w not in region and len(adj[w]) >= k:
                    region.add(w)
                    stack.append(w)
            if len(region) > limit:
                before = self.alive
                self._full_peel()
                return [x for x in range(self.n) if self.alive[x] and not before[x]]
        self.local_peels += 1
        count = {x: self.core_deg[x] + sum(1 for w in adj[x] if w in region) for x in region}
        queue = deque(sorted(x for x in region if count[x] < k))
        dead = set(queue)
        while queue:
            x = queue.popleft()
            for w in adj[x]:
                if w in region and w not in dead:
                    count[w] -= 1
                    if count[w] < k:
                        dead.add(w)
                        queue.append(w)
        joined = sorted(region - dead)
        for x in joined:
            alive[x] = True
        inside = 0
        for x in joined:
            for w in adj[x]:
                self.core_deg[w] += 1
                if alive[w]:
                    inside += 1
        # Edges between two joined vertices were counted from both sides.
        both = sum(1 for x in joined for w in adj[x] if w in region and w not in dead)
        self.core_edges += inside - both // 2
        self.core_size += len(joined)
        return joined


@dataclass
class HittingTrace:
    """Result of scanning a process for the first nonempty k-core.

    ``tau`` is ``None`` when the core never appears within the sequence.
    ``snapshots`` holds ``(t, core_size)`` at every multiple of the stride.
    """

    k: int
    tau: int | None
    core_size_at_tau: int = 0
    core_edges_at_tau: int = 0
    core_at_tau: frozenset[int] = frozenset()
    snapshots: list[tuple[int, int]] = field(default_factory=list)
    outside_regime: bool = False

    def as_dict(self) -> dict:
        return {"tau": self.tau, "core_size": self.core_size_at_tau, "core_edges": self.core_edges_at_tau}


def hitting_time(seq: EdgeSequence | Sequence[Edge], k: int, snapshot_every: int = 0,
                 n: int | None = None) -> HittingTrace:
    """Minimal t such that the first t edges of ``seq`` have a nonempty k-core.

    Nonemptiness of the core is monotone in t, so tau is located by bisection
    over prefixes with a batch peel per probe.  When ``snapshot_every > 0``
    the core is then tracked incrementally from tau to the end of the
    sequence; snapshots before tau are zero by minimality.
    """
    if n is None:
        n = seq.n
    edges = seq.edges if isinstance(seq, EdgeSequence) else list(seq)
    arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    T = len(arr)
    trace = HittingTrace(k=k, tau=None, outside_regime=k < MIN_REGIME_K)
    stride = int(snapshot_every)
    times = list(range(stride, T + 1, stride)) if stride > 0 else []

    def nonempty(t: int) -> bool:
        return n > 0 and any(_prefix_alive(n, arr, t, k))

    if k <= 0:
        tau = None if n == 0 else 0
    elif T == 0 or not nonempty(T):
        tau = None
    else:
        lo, hi = 0, T
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if nonempty(mid):
                hi = mid
            else:
                lo = mid
        tau = hi
    trace.tau = tau
    if tau is None:
        trace.snapshots = [(t, 0) for t in times]
        return trace

    alive = _prefix_alive(n, arr, tau, k)
    state = CoreState.from_alive(n, k, _csr(n, arr[:tau]), alive)
    trace.core_size_at_tau = state.core_size
    trace.core_edges_at_tau = state.core_edges
    trace.core_at_tau = state.vertices()
    snaps = [(t, 0) for t in times if t < tau]
    pending = [t for t in times if t >= tau]
    if pending:
        t = tau
        for target in pending:
            while t < target:
                u, v = arr[t]
                state.add_edge(int(u), int(v))
                t += 1
            snaps.append((target, state.core_size))
    trace.snapshots = snaps
    return trace


def run_to_core(n: int, k: int, seed: int, snapshot_every: int = 0,
                horizon: int | None = None) -> tuple[HittingTrace, ProcessSampler]:
    """Drive the seeded process until its k-core appears.

    The process is extended geometrically from ``k n / 2`` edges (the core
    cannot exist earlier than ``k n / 2`` edges since it needs ``k/2`` edges
    per vertex) until a core is seen, then tau is found exactly on that prefix.
    ``horizon`` additionally extends the sequence for post-tau snapshots.
    Returns the trace and the sampler, whose ``edges`` hold at least ``tau``
    edges.
    """
    sampler = ProcessSampler(n, seed)
    cap = pair_count(n)
    T = min(cap, max(1, k * n // 2))
    while True:
        arr = np.asarray(sampler.take(T), dtype=np.int64).reshape(-1, 2)
        if k <= 0 or any(_prefix_alive(n, arr, T, k)) or T == cap:
            break
        T = min(cap, int(T * 1.25) + 1)
    if horizon is not None and horizon > T:
        sampler.take(min(cap, horizon))
        T = min(cap, horizon)
    seq = EdgeSequence(n, seed, sampler.edges[:T])
    return hitting_time(seq, k, snapshot_every), sampler
