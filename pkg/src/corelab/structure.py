"""Checks of the structural properties used by the Hamiltonicity argument:
small-set expansion, odd components and Tutte's condition, disjoint cycles,
and the split of a future core into its settled and unsettled parts."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import _peel, peel_core
from .graph import Edge, Graph, GraphError, make_rng

EXHAUSTIVE_LIMIT = 20


# ---------------------------------------------------------------------------
# Expansion
# ---------------------------------------------------------------------------

@dataclass
class ExpansionReport:
    ratio: float
    size_bound: int
    mode: str
    samples: int = 0
    checked: int = 0
    violation_count: int = 0
    violations: list[frozenset[int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violation_count == 0

    def as_dict(self) -> dict:
        return {
            "check": "expansion", "ratio": self.ratio, "size_bound": self.size_bound,
            "mode": self.mode, "samples": self.samples, "checked": self.checked,
            "violation_count": self.violation_count, "pass": self.passed,
            "violations": [sorted(x) for x in self.violations],
        }


def external_neighbourhood(g: Graph, X: Iterable[int]) -> set[int]:
    X = set(X)
    out: set[int] = set()
    for v in X:
        out.update(g.adjacency[v])
    return out - X


def _square_adjacency(g: Graph) -> list[list[int]]:
    """Neighbours at distance 1 or 2."""
    adj = g.adjacency
    sq = []
    for v in range(g.n):
        reach = set(adj[v])
        for w in adj[v]:
            reach.update(adj[w])
        reach.discard(v)
        sq.append(sorted(reach))
    return sq


class _Collector:
    def __init__(self, g: Graph, ratio: float, report: ExpansionReport, max_witnesses: int):
        self.g, self.ratio, self.report, self.max_witnesses = g, ratio, report, max_witnesses

    def visit(self, X: frozenset[int], boundary: int) -> None:
        rep = self.report
        rep.checked += 1
        if boundary < self.ratio * len(X):
            # Witnesses are re-derived from the adjacency before being kept.
            if len(external_neighbourhood(self.g, X)) >= self.ratio * len(X):
                raise AssertionError(f"unsound expansion witness {sorted(X)}")
            rep.violation_count += 1
            if len(rep.violations) < self.max_witnesses:
                rep.violations.append(X)


def expansion_check(g: Graph, ratio: float, size_bound: int, mode: str = "exhaustive", *,
                    samples: int = 1000, seed: int = 0, deleted_edges: Iterable[Edge] = (),
                    max_witnesses: int = 50) -> ExpansionReport:
    """Look for sets X with ``|N(X) minus X| < ratio * |X|`` and ``|X| <= size_bound``.

    ``mode`` is ``"exhaustive"``, ``"naive"`` or ``"sampled"``.  Exhaustive
    mode only visits sets that are connected in the square of ``g``: parts of
    X at distance three or more have disjoint neighbourhoods, so a union of
    non-violating parts cannot violate.  It also skips every superset of a
    set whose boundary is too large to come back under the threshold before
    reaching ``size_bound``.  Naive mode tries every subset and exists to
    cross-check the pruning.  Sampled mode draws ``samples`` sets, each the
    first ``s`` vertices of a randomised BFS from a random root with ``s``
    uniform in ``[1, size_bound]``.  ``deleted_edges`` are removed from ``g``
    before checking.
    """
    if ratio <= 0:
        raise ValueError("ratio must be positive")
    deleted = list(deleted_edges)
    if deleted:
        g = g.without_edges(deleted)
    report = ExpansionReport(ratio=ratio, size_bound=size_bound, mode=mode)
    sink = _Collector(g, ratio, report, max_witnesses)
    if mode in ("exhaustive", "naive") and size_bound > EXHAUSTIVE_LIMIT:
        raise ValueError(f"exhaustive expansion check refused for size_bound > {EXHAUSTIVE_LIMIT}")
    if mode == "naive":
        for s in range(1, size_bound + 1):
            for X in itertools.combinations(range(g.n), s):
                sink.visit(frozenset(X), len(external_neighbourhood(g, X)))
    elif mode == "exhaustive":
        _enumerate_connected(g, ratio, size_bound, sink)
    elif mode == "sampled":
        report.samples = samples
        rng = make_rng(seed)
        for _ in range(samples):
            if g.n == 0:
                break
            s = int(rng.integers(1, size_bound + 1))
            X = _random_ball(g, int(rng.integers(g.n)), s, rng)
            sink.visit(X, len(external_neighbourhood(g, X)))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return report


def _enumerate_connected(g: Graph, ratio: float, bound: int, sink: _Collector) -> None:
    """ESU enumeration of square-connected sets, each visited once, with pruning."""
    sq = _square_adjacency(g)
    adj = g.adjacency

    def extend(X: list[int], nbhd: set[int], ext: list[int], root: int, closed: set[int]) -> None:
        boundary = len(nbhd)
        sink.visit(frozenset(X), boundary)
        size = len(X)
        if size == bound:
            return
        # Adding vertices can hide at most (bound - size) boundary vertices.
        if boundary - (bound - size) >= ratio * bound:
            return
        ext = list(ext)
        while ext:
            w = ext.pop()
            new_ext = ext + [u for u in sq[w] if u > root and u not in closed]
            added = [u for u in sq[w] if u > root and u not in closed]
            closed.update(added)
            nb = set(nbhd)
            nb.update(adj[w])
            nb.difference_update(X)
            nb.discard(w)
            extend(X + [w], nb, new_ext, root, closed)
            closed.difference_update(added)

    for v in range(g.n):
        closed = {v} | {u for u in sq[v] if u > v}
        extend([v], set(adj[v]), [u for u in sq[v] if u > v], v, closed)


def _random_ball(g: Graph, root: int, s: int, rng) -> frozenset[int]:
    seen = [root]
    marked = {root}
    head = 0
    while head < len(seen) and len(seen) < s:
        v = seen[head]
        head += 1
        nb = list(g.adjacency[v])
        rng.shuffle(nb)
        for w in nb:
            if w not in marked:
                marked.add(w)
                seen.append(w)
                if len(seen) == s:
                    break
    return frozenset(seen[:s])


# ---------------------------------------------------------------------------
# Components and Tutte's condition
# ---------------------------------------------------------------------------

def component_sizes(g: Graph, removed: Iterable[int] = ()) -> list[int]:
    """Sizes of the connected components of ``g`` minus ``removed``."""
    n = g.n
    gone = bytearray(n)
    for v in removed:
        if not 0 <= v < n:
            raise GraphError(f"vertex {v} not in graph")
        gone[v] = 1
    adj = g.adjacency
    sizes = []
    for s in range(n):
        if gone[s]:
            continue
        gone[s] = 1
        stack = [s]
        size = 0
        while stack:
            v = stack.pop()
            size += 1
            for w in adj[v]:
                if not gone[w]:
                    gone[w] = 1
                    stack.append(w)
        sizes.append(size)
    return sizes


def odd_components(g: Graph, removed: Iterable[int] = ()) -> int:
    """Number of odd-sized components of ``g`` minus ``removed``."""
    return sum(1 for s in component_sizes(g, removed) if s % 2)


@dataclass
class TutteReport:
    max_size: int
    samples: int
    checked: int = 0
    violations: list[tuple[frozenset[int], int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {"check": "tutte", "max_size": self.max_size, "samples": self.samples,
                "checked": self.checked, "pass": self.passed,
                "violations": [{"X": sorted(X), "odd": odd} for X, odd in self.violations]}


def tutte_scan(g: Graph, max_size: int = 2, samples: int = 0, seed: int = 0,
               max_witnesses: int = 50) -> TutteReport:
    """Check ``odd(g - X) <= |X|`` for every X up to ``max_size`` (at most 3) and
    for ``samples`` random X with sizes uniform in ``[max_size + 1, n // 2]``."""
    if max_size > 3:
        raise ValueError("exhaustive Tutte scan is limited to |X| <= 3")
    report = TutteReport(max_size=max_size, samples=samples)

    def check(X) -> None:
        report.checked += 1
        odd = odd_components(g, X)
        if odd > len(X) and len(report.violations) < max_witnesses:
            report.violations.append((frozenset(X), odd))

    for s in range(0, max_size + 1):
        for X in itertools.combinations(range(g.n), s):
            check(X)
    hi = g.n // 2
    if samples and hi > max_size:
        rng = make_rng(seed)
        for _ in range(samples):
            s = int(rng.integers(max_size + 1, hi + 1))
            check(rng.choice(g.n, size=s, replace=False).tolist())
    return report


# ---------------------------------------------------------------------------
# Disjoint cycles
# ---------------------------------------------------------------------------

def _shortest_cycle(adj: Sequence[set[int]], vertices: Iterable[int]) -> list[int] | None:
    """A shortest cycle among ``vertices`` (BFS from every root), or None."""
    best: list[int] | None = None
    for root in sorted(vertices):
        parent = {root: -1}
        depth = {root: 0}
        queue = deque([root])
        found = None
        while queue and found is None:
            v = queue.popleft()
            if best is not None and 2 * depth[v] + 1 >= len(best):
                break
            for w in sorted(adj[v]):
                if w == parent[v]:
                    continue
                if w in depth:
                    found = (v, w)
                    break
                parent[w] = v
                depth[w] = depth[v] + 1
                queue.append(w)
        if found is None:
            continue
        v, w = found
        left, right = [v], [w]
        while left[-1] != right[-1]:
            if depth[left[-1]] >= depth[right[-1]]:
                left.append(parent[left[-1]])
            else:
                right.append(parent[right[-1]])
        cycle = left + right[-2::-1]
        if best is None or len(cycle) < len(best):
            best = cycle
            if len(best) == 3:
                break
    return best


def count_disjoint_cycles_greedy(g: Graph) -> int:
    """Lower bound on the number of vertex-disjoint cycles: repeatedly remove a
    shortest cycle, after trimming to the 2-core."""
    adj = [set(a) for a in g.adjacency]
    count = 0
    while True:
        alive = _peel(g.n, adj, 2)
        for v in range(g.n):
            if not alive[v]:
                for w in adj[v]:
                    adj[w].discard(v)
                adj[v] = set()
        remaining = [v for v in range(g.n) if alive[v]]
        if not remaining:
            return count
        cycle = _shortest_cycle(adj, remaining)
        if cycle is None:
            return count
        count += 1
        for v in cycle:
            for w in adj[v]:
                adj[w].discard(v)
            adj[v] = set()


# ---------------------------------------------------------------------------
# Settled / unsettled split of the future core
# ---------------------------------------------------------------------------

@dataclass
class FutureCorePartition:
    """``settled`` holds the core vertices with >= k core neighbours already in
    the early graph, ``unsettled`` the rest; ``late_inside`` lists the late
    edges with both endpoints settled and ``J`` counts them."""

    k: int
    core: frozenset[int]
    settled: frozenset[int]
    unsettled: frozenset[int]
    late_inside: list[Edge]
    late_count: int

    @property
    def J(self) -> int:
        return len(self.late_inside)

    # Short names matching the usual notation.
    @property
    def B(self) -> frozenset[int]:
        return self.settled

    @property
    def C(self) -> frozenset[int]:
        return self.unsettled


def partition_future_core(g_full: Graph, h_prefix: Graph, k: int) -> FutureCorePartition:
    if g_full.n != h_prefix.n:
        raise GraphError("graphs must share the vertex set")
    if not h_prefix.edge_set <= g_full.edge_set:
        raise GraphError("early graph is not a subgraph of the full graph")
    core = peel_core(g_full, k)
    settled = frozenset(u for u in core
                        if sum(1 for w in h_prefix.adjacency[u] if w in core) >= k)
    late = [e for e in g_full.edges() if not h_prefix.has_edge(*e)]
    inside = [(u, v) for u, v in late if u in settled and v in settled]
    return FutureCorePartition(k=k, core=core, settled=settled, unsettled=core - settled,
                               late_inside=inside, late_count=len(late))


def verify_core_vertex_stability(g_full: Graph, h_prefix: Graph, k: int,
                                 extra_inside: Iterable[Edge],
                                 partition: FutureCorePartition | None = None) -> bool:
    """Whether the core keeps its vertex set when the late settled-settled edges
    are replaced by ``extra_inside`` (pairs inside the settled set)."""
    part = partition or partition_future_core(g_full, h_prefix, k)
    n = g_full.n
    extra = []
    for u, v in extra_inside:
        if u == v or u not in part.settled or v not in part.settled:
            raise GraphError(f"pair ({u}, {v}) is not inside the settled set")
        extra.append((min(u, v), max(u, v)))
    drop = {u * n + v for u, v in part.late_inside}
    codes = {c for c in g_full.edge_set if c not in drop}
    codes.update(u * n + v for u, v in extra)
    adj: list[list[int]] = [[] for _ in range(n)]
    for c in codes:
        u, v = divmod(c, n)
        adj[u].append(v)
        adj[v].append(u)
    alive = _peel(n, adj, k)
    return frozenset(v for v in range(n) if alive[v]) == part.core
