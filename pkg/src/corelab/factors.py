"""f-factors through the stub/filler gadget reduction to perfect matching, and
the decomposition of 2s-regular graphs into s edge-disjoint 2-factors."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .graph import Edge, Graph, GraphError
from .matching import UNMATCHED, PathSystem, maximum_mate


@dataclass(frozen=True)
class FactorSpec:
    """Target degree f(v) for every vertex."""

    f: tuple[int, ...]

    @classmethod
    def uniform(cls, n: int, value: int) -> "FactorSpec":
        return cls(tuple([value] * n))

    def check(self, g: Graph) -> None:
        if len(self.f) != g.n:
            raise GraphError(f"factor spec has {len(self.f)} entries for {g.n} vertices")
        for v, fv in enumerate(self.f):
            if not 0 <= fv <= g.degree(v):
                raise GraphError(f"f({v}) = {fv} outside [0, deg {g.degree(v)}]")
        if sum(self.f) % 2:
            raise GraphError("sum of f is odd")

    def feasible(self, g: Graph) -> bool:
        try:
            self.check(g)
        except GraphError:
            return False
        return True


def _as_spec(g: Graph, f) -> FactorSpec:
    if isinstance(f, FactorSpec):
        spec = f
    elif isinstance(f, int):
        spec = FactorSpec.uniform(g.n, f)
    else:
        spec = FactorSpec(tuple(int(x) for x in f))
    if len(spec.f) != g.n:
        raise GraphError(f"factor spec has {len(spec.f)} entries for {g.n} vertices")
    if any(x < 0 for x in spec.f):
        raise GraphError("negative target degree")
    return spec


class _Gadget:
    """Each vertex v becomes deg(v) stubs, one per incident edge, plus
    deg(v) - f(v) fillers joined to all of v's stubs; the two stubs of an
    original edge are adjacent.  Perfect matchings correspond to f-factors:
    a stub left for its partner stub is exactly a selected edge."""

    def __init__(self, g: Graph, f: Sequence[int]):
        self.g = g
        adj = g.adjacency
        n = g.n
        self.stub_base = [0] * n
        pos = 0
        for v in range(n):
            self.stub_base[v] = pos
            pos += len(adj[v])
        self.n_stubs = pos
        self.fill_base = [0] * n
        for v in range(n):
            self.fill_base[v] = pos
            pos += len(adj[v]) - f[v]
        self.size = pos
        # index of v inside adj[w], for partner stubs
        where = [dict() for _ in range(n)]
        for v in range(n):
            for j, w in enumerate(adj[v]):
                where[v][w] = j
        gadj: list[list[int]] = [[] for _ in range(pos)]
        for v in range(n):
            fillers = list(range(self.fill_base[v], self.fill_base[v] + len(adj[v]) - f[v]))
            stubs = range(self.stub_base[v], self.stub_base[v] + len(adj[v]))
            for j, w in enumerate(adj[v]):
                s = self.stub_base[v] + j
                gadj[s].append(self.stub_base[w] + where[w][v])
                gadj[s].extend(fillers)
            for x in fillers:
                gadj[x].extend(stubs)
        self.adj = gadj
        self.where = where
        self.f = f

    def warm_start(self) -> list[int]:
        """Greedy partial f-factor, then fillers on the unselected stubs."""
        g, f = self.g, self.f
        adj = g.adjacency
        chosen = [0] * g.n
        mate = [UNMATCHED] * self.size
        for u in range(g.n):
            for j, w in enumerate(adj[u]):
                if w > u and chosen[u] < f[u] and chosen[w] < f[w]:
                    a = self.stub_base[u] + j
                    b = self.stub_base[w] + self.where[w][u]
                    mate[a], mate[b] = b, a
                    chosen[u] += 1
                    chosen[w] += 1
        for v in range(g.n):
            fill = self.fill_base[v]
            last = fill + len(adj[v]) - f[v]
            for s in range(self.stub_base[v], self.stub_base[v] + len(adj[v])):
                if fill == last:
                    break
                if mate[s] == UNMATCHED:
                    mate[s], mate[fill] = fill, s
                    fill += 1
        return mate

    def factor_edges(self, mate: Sequence[int]) -> list[Edge]:
        adj = self.g.adjacency
        out = []
        for v in range(self.g.n):
            for j, w in enumerate(adj[v]):
                if v < w:
                    s = self.stub_base[v] + j
                    if mate[s] == self.stub_base[w] + self.where[w][v]:
                        out.append((v, w))
        return out


def f_factor(g: Graph, f) -> Graph | None:
    """Spanning subgraph with degree exactly f(v) at every v, or ``None``.

    ``f`` is a FactorSpec, a per-vertex sequence or a single integer.  A
    spec that cannot be met for degree or parity reasons yields ``None``
    without building the gadget.
    """
    spec = _as_spec(g, f)
    if not spec.feasible(g):
        return None
    gadget = _Gadget(g, spec.f)
    mate = maximum_mate(gadget.adj, gadget.warm_start())
    if any(x == UNMATCHED for x in mate):
        return None
    h = Graph(g.n, gadget.factor_edges(mate))
    for u, v in h.edges():
        if not g.has_edge(u, v):
            raise RuntimeError("factor edge outside host graph")
    if tuple(int(d) for d in h.degrees()) != spec.f:
        raise RuntimeError("factor degrees differ from the spec")
    return h


# ---------------------------------------------------------------------------
# 2-factorization of even regular graphs
# ---------------------------------------------------------------------------

def euler_orientation(g: Graph) -> list[Edge]:
    """Arcs ``(u, v)`` following an Euler circuit of each component of an
    even-degree graph, so every vertex gets in-degree equal to out-degree."""
    adj = g.adjacency
    used: set[int] = set()
    ptr = [0] * g.n
    arcs: list[Edge] = []
    n = g.n
    for start in range(n):
        if ptr[start] == len(adj[start]):
            continue
        stack = [start]
        circuit = []
        while stack:
            v = stack[-1]
            a = adj[v]
            while ptr[v] < len(a) and (min(v, a[ptr[v]]) * n + max(v, a[ptr[v]])) in used:
                ptr[v] += 1
            if ptr[v] == len(a):
                circuit.append(stack.pop())
            else:
                w = a[ptr[v]]
                used.add(min(v, w) * n + max(v, w))
                stack.append(w)
        circuit.reverse()
        arcs.extend(zip(circuit, circuit[1:]))
    return arcs


def hopcroft_karp(n_left: int, n_right: int, adj: Sequence[Sequence[int]]) -> list[int]:
    """Maximum bipartite matching; returns the right partner of each left vertex."""
    INF = float("inf")
    match_l = [UNMATCHED] * n_left
    match_r = [UNMATCHED] * n_right
    dist = [0.0] * n_left
    while True:
        queue = deque()
        for u in range(n_left):
            if match_l[u] == UNMATCHED:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == UNMATCHED:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if not found:
            return match_l
        ptr = [0] * n_left
        for root in range(n_left):
            if match_l[root] != UNMATCHED:
                continue
            # iterative layered DFS
            stack = [root]
            while stack:
                u = stack[-1]
                advanced = False
                while ptr[u] < len(adj[u]):
                    v = adj[u][ptr[u]]
                    ptr[u] += 1
                    w = match_r[v]
                    if w == UNMATCHED:
                        # augment along the stack
                        for x in reversed(stack):
                            prev = match_l[x]
                            match_l[x], match_r[v] = v, x
                            v = prev
                        stack = []
                        advanced = True
                        break
                    if dist[w] == dist[u] + 1:
                        stack.append(w)
                        advanced = True
                        break
                if not advanced:
                    dist[u] = INF
                    stack.pop()


def _cycles_of_permutation(succ: Sequence[int]) -> list[list[int]]:
    seen = [False] * len(succ)
    cycles = []
    for s in range(len(succ)):
        if not seen[s]:
            cyc = []
            v = s
            while not seen[v]:
                seen[v] = True
                cyc.append(v)
                v = succ[v]
            cycles.append(cyc)
    return cycles


def petersen_decompose(g: Graph) -> list[PathSystem]:
    """Split a 2s-regular graph into s edge-disjoint spanning 2-regular factors.

    Orient along Euler circuits, so the out/in bipartite double cover is
    s-regular; each of its perfect matchings is a successor permutation
    whose cycles form one 2-factor.
    """
    n = g.n
    if n == 0:
        return []
    degs = g.degrees()
    d = int(degs[0])
    if not (degs == d).all() or d % 2 or d == 0:
        raise GraphError("petersen_decompose needs a 2s-regular graph with s >= 1")
    s = d // 2
    out_adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in euler_orientation(g):
        out_adj[u].append(v)
    for a in out_adj:
        a.sort()
    factors = []
    for _ in range(s):
        succ = hopcroft_karp(n, n, out_adj)
        if any(x == UNMATCHED for x in succ):
            raise RuntimeError("regular bipartite cover lacks a perfect matching")
        for u in range(n):
            out_adj[u].remove(succ[u])
        factor = PathSystem(n=n, cycles=_cycles_of_permutation(succ))
        factor.validate(g)
        factors.append(factor)
    seen: set[Edge] = set()
    for factor in factors:
        for e in factor.edges():
            if e in seen:
                raise RuntimeError("2-factors share an edge")
            seen.add(e)
    if len(seen) != g.m:
        raise RuntimeError("2-factors do not cover the graph")
    return factors
