"""Maximum-cardinality matching in general graphs (Edmonds' blossom search)
and the near-perfect-matching constructions built on it."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .graph import Edge, Graph, GraphError

UNMATCHED = -1


# ---------------------------------------------------------------------------
# Blossom search
# ---------------------------------------------------------------------------

def _search(adj: Sequence[Sequence[int]], mate: list[int], root: int) -> tuple[bool, set[int]]:
    """Grow an alternating tree from the free vertex ``root``.

    Blossoms are contracted through a union-find over their bases.  All
    per-search state lives in dicts so a search that finds a short augmenting
    path only touches the vertices it explores.  On success the matching is
    augmented in place; on failure the set of even (outer) vertices is
    returned.
    """
    parent: dict[int, int] = {}
    base: dict[int, int] = {}
    even = {root}
    queue = deque([root])

    def find(x: int) -> int:
        r = x
        while r in base:
            r = base[r]
        while x != r:
            nxt = base[x]
            base[x] = r
            x = nxt
        return r

    def lca(a: int, b: int) -> int:
        seen = set()
        while True:
            a = find(a)
            seen.add(a)
            if mate[a] == UNMATCHED:
                break
            a = parent[mate[a]]
        while True:
            b = find(b)
            if b in seen:
                return b
            b = parent[mate[b]]

    def mark_path(v: int, b: int, child: int, reps: set[int]) -> None:
        while find(v) != b:
            mv = mate[v]
            reps.add(find(v))
            reps.add(find(mv))
            parent[v] = child
            child = mv
            if mv not in even:
                even.add(mv)
                queue.append(mv)
            v = parent[mv]

    while queue:
        v = queue.popleft()
        for to in adj[v]:
            if mate[v] == to:
                continue
            fv, ft = find(v), find(to)
            if fv == ft:
                continue
            if to in even:
                top = lca(v, to)
                reps: set[int] = set()
                mark_path(v, top, to, reps)
                mark_path(to, top, v, reps)
                for r in reps:
                    if r != top:
                        base[r] = top
            elif to not in parent:
                parent[to] = v
                if mate[to] == UNMATCHED:
                    x = to
                    while x != UNMATCHED:
                        px = parent[x]
                        nxt = mate[px]
                        mate[x] = px
                        mate[px] = x
                        x = nxt
                    return True, even
                nxt = mate[to]
                even.add(nxt)
                queue.append(nxt)
    return False, even


def greedy_mate(adj: Sequence[Sequence[int]]) -> list[int]:
    n = len(adj)
    mate = [UNMATCHED] * n
    for v in range(n):
        if mate[v] == UNMATCHED:
            for w in adj[v]:
                if mate[w] == UNMATCHED and w != v:
                    mate[v], mate[w] = w, v
                    break
    return mate


def maximum_mate(adj: Sequence[Sequence[int]], mate: list[int] | None = None) -> list[int]:
    """Mate array of a maximum matching, grown from ``mate`` (greedy by default).

    One pass over the free vertices is enough: a vertex with no augmenting
    path keeps having none after augmentations elsewhere.
    """
    mate = greedy_mate(adj) if mate is None else list(mate)
    for r in range(len(adj)):
        if mate[r] == UNMATCHED:
            _search(adj, mate, r)
    return mate


def deficiency_witness(adj: Sequence[Sequence[int]], mate: list[int]) -> tuple[set[int], set[int]]:
    """Gallai-Edmonds sets ``(D, A)`` for a maximum matching.

    ``D`` holds the vertices missed by some maximum matching (the even
    vertices of the failed searches) and ``A`` their outside neighbours;
    ``g - A`` then has exactly ``|A| + deficiency`` odd components.
    """
    D: set[int] = set()
    for r in range(len(adj)):
        if mate[r] == UNMATCHED:
            trial = list(mate)
            ok, even = _search(adj, trial, r)
            if ok:
                raise RuntimeError("matching passed in is not maximum")
            D |= even
    A = {w for v in D for w in adj[v]} - D
    return D, A


# ---------------------------------------------------------------------------
# Public types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Matching:
    edges: tuple[Edge, ...]
    covered: frozenset[int]

    @classmethod
    def from_mate(cls, mate: Sequence[int], host: Graph | None = None) -> "Matching":
        edges = tuple((v, w) for v, w in enumerate(mate) if w != UNMATCHED and v < w)
        m = cls(edges=edges, covered=frozenset(x for e in edges for x in e))
        if host is not None:
            m.validate(host)
        return m

    def __len__(self) -> int:
        return len(self.edges)

    def validate(self, host: Graph) -> None:
        seen: set[int] = set()
        for u, v in self.edges:
            if not host.has_edge(u, v):
                raise GraphError(f"matching edge ({u}, {v}) not in graph")
            if u in seen or v in seen:
                raise GraphError(f"matching edges share vertex in ({u}, {v})")
            seen.update((u, v))
        if seen != set(self.covered):
            raise GraphError("covered set inconsistent with edges")

    def missed(self, n: int) -> list[int]:
        return [v for v in range(n) if v not in self.covered]


@dataclass(frozen=True)
class TutteWitness:
    """A set X whose removal leaves more than ``|X| + 1`` odd components."""

    X: frozenset[int]
    odd: int
    stage: str = "matching"

    def __bool__(self) -> bool:
        return False


def max_matching(g: Graph) -> Matching:
    return Matching.from_mate(maximum_mate(g.adjacency), g)


def near_perfect_matching(g: Graph) -> Matching | TutteWitness:
    """A matching missing at most one vertex, or a Tutte witness that none exists."""
    mate = maximum_mate(g.adjacency)
    match = Matching.from_mate(mate, g)
    if g.n - len(match.covered) <= 1:
        return match
    _, A = deficiency_witness(g.adjacency, mate)
    deficiency = g.n - len(match.covered)
    return TutteWitness(X=frozenset(A), odd=len(A) + deficiency)


# ---------------------------------------------------------------------------
# Path systems
# ---------------------------------------------------------------------------

@dataclass
class PathSystem:
    """One path plus vertex-disjoint cycles covering all ``n`` vertices.

    Cycles are vertex lists with the closing edge implied; a single-vertex
    cycle stands for an isolated vertex.  The path may be empty.
    """

    n: int
    path: list[int] = field(default_factory=list)
    cycles: list[list[int]] = field(default_factory=list)

    @property
    def covered(self) -> frozenset[int]:
        return frozenset(self.path) | frozenset(v for c in self.cycles for v in c)

    def edges(self) -> list[Edge]:
        out = [tuple(sorted(p)) for p in zip(self.path, self.path[1:])]
        for c in self.cycles:
            if len(c) >= 3:
                out.extend(tuple(sorted((c[i], c[(i + 1) % len(c)]))) for i in range(len(c)))
        return out

    def is_hamilton_cycle(self) -> bool:
        return not self.path and len(self.cycles) == 1 and len(self.cycles[0]) == self.n >= 3

    def validate(self, host: Graph) -> None:
        if host.n != self.n:
            raise GraphError("path system and graph disagree on n")
        seen: list[int] = list(self.path) + [v for c in self.cycles for v in c]
        if len(seen) != len(set(seen)):
            raise GraphError("path and cycles are not vertex-disjoint")
        if set(seen) != set(range(self.n)):
            raise GraphError("path system does not cover every vertex")
        for c in self.cycles:
            if len(c) == 2:
                raise GraphError("cycles need length >= 3 or a single vertex")
        for u, v in self.edges():
            if not host.has_edge(u, v):
                raise GraphError(f"edge ({u}, {v}) of the path system is not in the graph")


def decompose_max_degree_two(n: int, edges: Sequence[Edge]) -> PathSystem:
    """Split a spanning subgraph of maximum degree 2 with at most one path
    component into that path and cycles (isolated vertices are trivial cycles)."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    for a in adj:
        if len(a) > 2:
            raise GraphError("subgraph has a vertex of degree above 2")
        a.sort()
    done = [False] * n
    paths = []
    cycles = []
    for s in range(n):
        if not done[s] and len(adj[s]) == 1:
            walk = [s]
            done[s] = True
            prev, cur = -1, s
            while True:
                nxt = [w for w in adj[cur] if w != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                walk.append(cur)
                done[cur] = True
            paths.append(walk)
    for s in range(n):
        if done[s]:
            continue
        if not adj[s]:
            cycles.append([s])
            done[s] = True
            continue
        walk = [s]
        done[s] = True
        prev, cur = s, adj[s][0]
        while cur != s:
            walk.append(cur)
            done[cur] = True
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        cycles.append(walk)
    if len(paths) > 1:
        raise GraphError("more than one path component")
    return PathSystem(n=n, path=paths[0] if paths else [], cycles=cycles)


def two_factor_via_matchings(g: Graph) -> PathSystem | TutteWitness:
    """Union of two edge-disjoint near-perfect matchings, as a path plus cycles."""
    first = near_perfect_matching(g)
    if isinstance(first, TutteWitness):
        return TutteWitness(first.X, first.odd, stage="first matching")
    rest = g.without_edges(first.edges)
    second = near_perfect_matching(rest)
    if isinstance(second, TutteWitness):
        return TutteWitness(second.X, second.odd, stage="second matching")
    system = decompose_max_degree_two(g.n, list(first.edges) + list(second.edges))
    system.validate(g)
    return system
