"""Posa rotation-extension, boosters, cycle absorption, the sprinkling driver
and a restart-based Hamiltonicity heuristic built on them."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graph import Edge, Graph, GraphError, make_rng
from .matching import PathSystem, TutteWitness, two_factor_via_matchings

EXTENDED = "extended"
CLOSED = "closed"
BOOSTERS = "boosters"


def _pair(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


# ---------------------------------------------------------------------------
# Rotation closure
# ---------------------------------------------------------------------------

@dataclass
class RotationOutcome:
    """Result of a rotation closure from one path.

    ``kind`` is ``extended`` (``path`` has one more vertex), ``closed``
    (``cycle`` spans exactly the original vertex set) or ``boosters``
    (``boosters`` lists non-edges that would close such a cycle).
    """

    kind: str
    path: list[int] | None = None
    cycle: list[int] | None = None
    boosters: list[Edge] = field(default_factory=list)
    rotations: int = 0
    capped: bool = False
    # replay data: root path, per state (parent, pivot or -1 for a flip)
    _root: np.ndarray | None = field(default=None, repr=False)
    _ops: list[tuple[int, int]] = field(default_factory=list, repr=False)
    _by_pair: dict[Edge, int] = field(default_factory=dict, repr=False)
    _booster_set: set[Edge] = field(default_factory=set, repr=False)
    _ends: dict[int, set[int]] = field(default_factory=dict, repr=False)

    def booster_path(self, pair: Edge) -> list[int]:
        """A discovered path on the original vertex set whose endpoints are ``pair``."""
        idx = self._by_pair[_pair(*pair)]
        chain = []
        while idx > 0:
            chain.append(self._ops[idx])
            idx = self._ops[idx][0]
        p = self._root
        for _, op in reversed(chain):
            p = p[::-1] if op < 0 else np.concatenate((p[: op + 1], p[: op : -1]))
        return p.tolist()

    def endpoint_partners(self, v: int) -> set[int]:
        """Vertices w such that some discovered path runs from v to w."""
        return self._ends.get(v, set())


def _rotate_extend(adj: Sequence, path: Sequence[int], max_rotations: int) -> RotationOutcome:
    n = len(adj)
    root = np.asarray(path, dtype=np.int64)
    h1 = len(root)
    pos = np.full(n, -1, dtype=np.int64)
    pos[root] = np.arange(h1)
    inside = pos >= 0
    out = RotationOutcome(kind=BOOSTERS, _root=root)
    if h1 == 0:
        raise GraphError("empty path")
    if h1 == 1:
        v = int(root[0])
        nb = sorted(adj[v])
        if nb:
            out.kind, out.path = EXTENDED, [v, nb[0]]
        else:
            out.kind, out.cycle = CLOSED, [v]
        return out

    ops: list[tuple[int, int]] = [(-1, -1)]
    seen = {(int(root[0]), int(root[-1]))}
    queue = deque([(0, root)])
    expanded = 0
    while queue:
        idx, p = queue.popleft()
        a, e = int(p[0]), int(p[-1])
        nbrs = sorted(adj[e])
        pos[p] = np.arange(h1)
        for w in nbrs:
            if not inside[w]:
                out.kind, out.path = EXTENDED, p.tolist() + [w]
                out.rotations = expanded
                return out
        if h1 >= 3 and a in adj[e]:
            out.kind, out.cycle = CLOSED, p.tolist()
            out.rotations = expanded
            return out
        key = _pair(a, e)
        if key not in out._by_pair:
            out._by_pair[key] = idx
            if h1 >= 3:
                out._booster_set.add(key)
                out.boosters.append(key)
        out._ends.setdefault(a, set()).add(e)
        out._ends.setdefault(e, set()).add(a)
        if expanded >= max_rotations:
            out.capped = True
            break
        expanded += 1
        for w in nbrs:
            i = int(pos[w])
            if i == h1 - 2 or i == 0:
                continue
            new_end = int(p[i + 1])
            if (a, new_end) in seen:
                continue
            seen.add((a, new_end))
            ops.append((idx, i))
            queue.append((len(ops) - 1, np.concatenate((p[: i + 1], p[:i:-1]))))
        if (e, a) not in seen:
            seen.add((e, a))
            ops.append((idx, -1))
            queue.append((len(ops) - 1, p[::-1]))
    # Paths generated but never expanded still certify their endpoint pair.
    for idx, p in queue:
        a, e = int(p[0]), int(p[-1])
        key = _pair(a, e)
        if key not in out._by_pair and a not in adj[e]:
            out._by_pair[key] = idx
            if h1 >= 3:
                out._booster_set.add(key)
                out.boosters.append(key)
            out._ends.setdefault(a, set()).add(e)
            out._ends.setdefault(e, set()).add(a)
    out._ops = ops
    out.rotations = expanded
    return out


def _check_path(g: Graph, path: Sequence[int]) -> None:
    if len(set(path)) != len(path):
        raise GraphError("path repeats a vertex")
    for v in path:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} out of range")
    for u, v in zip(path, path[1:]):
        if not g.has_edge(u, v):
            raise GraphError(f"path step ({u}, {v}) is not an edge")


def rotate_extend(g: Graph, path: Sequence[int], max_rotations: int | None = None) -> RotationOutcome:
    """Breadth-first closure over Posa rotations at both ends of ``path``.

    States are oriented paths on V(path), deduplicated by (fixed end, moving
    end).  Each dequeued state is tested, in order, for an extension of its
    moving end to a vertex outside the path (smallest index first) and for a
    closing edge between its ends; the first hit is returned.  If neither
    occurs, every endpoint pair reached is a booster.  ``max_rotations``
    (default 4n) caps the states expanded.
    """
    _check_path(g, path)
    cap = 4 * g.n if max_rotations is None else max_rotations
    adj = [set(a) for a in g.adjacency]
    return _rotate_extend(adj, path, cap)


# ---------------------------------------------------------------------------
# Absorption
# ---------------------------------------------------------------------------

def _unravel(cycle: Sequence[int], start: int) -> list[int]:
    """The cycle as a path beginning at ``start`` (drops the edge into it)."""
    i = list(cycle).index(start)
    return list(cycle[i:]) + list(cycle[:i])


def absorb_cycle(g: Graph, path: Sequence[int], cycle: Sequence[int]) -> list[int] | None:
    """Join a vertex-disjoint cycle onto an end of ``path``; ``None`` if no
    edge links a path end to the cycle."""
    if set(path) & set(cycle):
        raise GraphError("path and cycle share vertices")
    if not path:
        return list(cycle)
    members = sorted(cycle)
    for end, base in ((path[-1], list(path)), (path[0], list(path)[::-1])):
        for c in members:
            if g.has_edge(end, c):
                return base + _unravel(cycle, c)
    return None


# ---------------------------------------------------------------------------
# Sprinkling
# ---------------------------------------------------------------------------

@dataclass
class SprinkleBudget:
    """Reserved edges, revealed one at a time."""

    stream: list[Edge]
    consumed: int = 0
    boosters_hit: int = 0

    def exhausted(self) -> bool:
        return self.consumed >= len(self.stream)

    def take(self) -> Edge:
        e = self.stream[self.consumed]
        self.consumed += 1
        return e

    @property
    def remaining(self) -> int:
        return len(self.stream) - self.consumed


@dataclass
class SprinkleResult:
    status: str  # "hamiltonian" or "exhausted"
    cycle: list[int] | None
    consumed: int
    boosters_hit: int
    rotations: int
    added: list[Edge] = field(default_factory=list)
    trace: list[tuple[str, int, int]] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.status == "hamiltonian"


def validate_hamilton_cycle(adj_or_graph, cycle: Sequence[int], n: int) -> bool:
    if len(cycle) != n or n < 3 or len(set(cycle)) != n:
        return False
    if isinstance(adj_or_graph, Graph):
        has = adj_or_graph.has_edge
    else:
        has = lambda u, v: v in adj_or_graph[u]  # noqa: E731
    return all(0 <= v < n for v in cycle) and all(has(cycle[i], cycle[(i + 1) % n]) for i in range(n))


class _Sprinkler:
    def __init__(self, g: Graph, factor: PathSystem, budget: SprinkleBudget,
                 allowed: Iterable[int] | None, max_rotations: int | None):
        factor.validate(g)
        self.n = g.n
        self.adj = [set(a) for a in g.adjacency]
        self.budget = budget
        self.allowed = None if allowed is None else frozenset(allowed)
        self.cap = 4 * g.n if max_rotations is None else max_rotations
        self.path = list(factor.path)
        self.cycles: dict[int, list[int]] = {}
        self.owner = [-1] * g.n
        for cid, c in enumerate(factor.cycles):
            self.cycles[cid] = list(c)
            for v in c:
                self.owner[v] = cid
        self.added: list[Edge] = []
        self.rotations = 0
        self.trace: list[tuple[str, int, int]] = []

    def note(self, event: str) -> None:
        self.trace.append((event, self.budget.consumed, len(self.path)))

    def reveal(self) -> Edge:
        u, v = self.budget.take()
        if u == v or not (0 <= u < self.n and 0 <= v < self.n):
            raise GraphError(f"budget edge ({u}, {v}) is not a valid pair")
        if self.allowed is not None and (u not in self.allowed or v not in self.allowed):
            raise GraphError(f"budget edge ({u}, {v}) leaves the allowed vertex set")
        if v in self.adj[u]:
            raise GraphError(f"budget edge ({u}, {v}) is already present")
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.added.append(_pair(u, v))
        return u, v

    def take_cycle(self, cid: int) -> list[int]:
        c = self.cycles.pop(cid)
        for v in c:
            self.owner[v] = -1
        return c

    def absorb_at(self, u: int) -> list[int]:
        return _unravel(self.take_cycle(self.owner[u]), u)

    def open_toward_outside(self, cycle: list[int]) -> bool:
        """Cut a cycle on V(P) next to its smallest vertex with an outside
        neighbour and splice in that neighbour's cycle."""
        for x in sorted(cycle):
            outs = sorted(w for w in self.adj[x] if self.owner[w] >= 0)
            if outs:
                j = cycle.index(x)
                opened = cycle[j + 1:] + cycle[: j + 1]
                self.path = opened + self.absorb_at(outs[0])
                return True
        return False

    def finish(self, cycle: list[int]) -> SprinkleResult:
        if not validate_hamilton_cycle(self.adj, cycle, self.n):
            raise RuntimeError("sprinkling produced an invalid Hamilton cycle")
        self.note("hamiltonian")
        return SprinkleResult("hamiltonian", cycle, self.budget.consumed, self.budget.boosters_hit,
                              self.rotations, self.added, self.trace)

    def give_up(self) -> SprinkleResult:
        self.note("exhausted")
        return SprinkleResult("exhausted", None, self.budget.consumed, self.budget.boosters_hit,
                              self.rotations, self.added, self.trace)

    def run(self) -> SprinkleResult:
        if self.n < 3:
            return self.give_up()
        while True:
            if not self.path:
                cid = max(self.cycles, key=lambda c: (len(self.cycles[c]), -min(self.cycles[c])))
                c = self.take_cycle(cid)
                if len(c) == self.n and len(c) >= 3:
                    return self.finish(c)
                self.path = c
            outcome = _rotate_extend(self.adj, self.path, self.cap)
            self.rotations += outcome.rotations
            if outcome.kind == EXTENDED:
                self.path = outcome.path[:-1] + self.absorb_at(outcome.path[-1])
                self.note("extended")
                continue
            if outcome.kind == CLOSED:
                if not self.cycles:
                    return self.finish(outcome.cycle)
                if self.handle_closed(outcome.cycle):
                    continue
                return self.give_up()
            # Boosters: reveal budget edges until one closes a cycle or
            # gives a discovered endpoint a route out of the path.
            progressed = False
            while not self.budget.exhausted():
                u, v = self.reveal()
                key = _pair(u, v)
                if key in outcome._booster_set:
                    self.budget.boosters_hit += 1
                    cycle = outcome.booster_path(key)
                    self.note("booster")
                    if not self.cycles:
                        return self.finish(cycle)
                    if not self.handle_closed(cycle):
                        return self.give_up()
                    progressed = True
                    break
                ends = outcome._ends
                for x, y in ((u, v), (v, u)):
                    if x in ends and self.owner[y] >= 0:
                        p = outcome.booster_path((x, min(ends[x])))
                        if p[-1] != x:
                            p.reverse()
                        self.path = p + self.absorb_at(y)
                        self.note("reached")
                        progressed = True
                        break
                if progressed:
                    break
            if not progressed:
                return self.give_up()

    def handle_closed(self, cycle: list[int]) -> bool:
        """Cycle on V(P): reopen it toward an outside vertex, revealing budget
        edges if nothing leaves it.  False when the budget runs dry."""
        self.note("closed")
        while not self.open_toward_outside(cycle):
            if self.budget.exhausted():
                return False
            self.reveal()
        return True


def sprinkle_to_hamilton(g: Graph, factor: PathSystem, budget: SprinkleBudget,
                         allowed: Iterable[int] | None = None,
                         max_rotations: int | None = None) -> SprinkleResult:
    """Turn a path-plus-cycles factor into a Hamilton cycle of ``g`` plus
    revealed budget edges.

    Each round rotates the current path.  An extension absorbs the cycle it
    reaches; a closed cycle that is not yet spanning is reopened toward an
    outside vertex; otherwise budget edges are revealed and added until one
    is a booster or lets a discovered endpoint leave the path.  Every budget
    edge must lie inside ``allowed`` and be new when revealed.
    """
    return _Sprinkler(g, factor, budget, allowed, max_rotations).run()


# ---------------------------------------------------------------------------
# Heuristic solver
# ---------------------------------------------------------------------------

@dataclass
class HamResult:
    status: str  # "found" or "unknown"
    cycle: list[int] | None = None
    rotations: int = 0
    boosters_used: int = 0
    restarts: int = 0

    def as_dict(self) -> dict:
        out = {"status": self.status}
        if self.cycle is not None:
            out["cycle"] = self.cycle
        out.update(rotations=self.rotations, boosters_used=self.boosters_used)
        return out


def greedy_path_system(g: Graph) -> PathSystem:
    """A long path grown greedily toward low-degree unvisited neighbours,
    with every other vertex as a trivial cycle."""
    if g.n == 0:
        return PathSystem(0)
    adj = g.adjacency
    left = [len(a) for a in adj]
    used = [False] * g.n
    v = min(range(g.n), key=lambda x: (left[x], x))
    path = [v]
    used[v] = True
    while True:
        for w in adj[v]:
            left[w] -= 1
        nxt = [w for w in adj[v] if not used[w]]
        if not nxt:
            break
        v = min(nxt, key=lambda x: (left[x], x))
        used[v] = True
        path.append(v)
    return PathSystem(g.n, path=path, cycles=[[x] for x in range(g.n) if not used[x]])


def _initial_factor(g: Graph) -> PathSystem:
    system = two_factor_via_matchings(g)
    if isinstance(system, TutteWitness):
        return greedy_path_system(g)
    return system


def _connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = bytearray(g.n)
    seen[0] = 1
    stack = [0]
    count = 1
    while stack:
        v = stack.pop()
        for w in g.adjacency[v]:
            if not seen[w]:
                seen[w] = 1
                count += 1
                stack.append(w)
    return count == g.n


def hamiltonicity_solve(g: Graph, restart_budget: int = 8, seed: int = 0,
                        initial: PathSystem | None = None, holdout: float = 0.2) -> HamResult:
    """Search for a Hamilton cycle of ``g``; ``unknown`` is not a proof of absence.

    The first attempt sprinkles nothing onto a factor of the whole graph
    (``initial`` if given, else two near-perfect matchings, else a greedy
    path).  Each restart relabels the graph at random and holds back a
    fraction of the non-factor edges as its own sprinkle stream.
    """
    result = HamResult(status="unknown")
    n = g.n
    if n < 3 or g.min_degree() < 2 or not _connected(g):
        return result
    rng = make_rng(seed)
    for attempt in range(restart_budget + 1):
        result.restarts = attempt
        if attempt == 0:
            factor = initial if initial is not None else _initial_factor(g)
            out = sprinkle_to_hamilton(g, factor, SprinkleBudget([]))
            result.rotations += out.rotations
            if out.found:
                result.status, result.cycle = "found", out.cycle
                return result
            continue
        perm = rng.permutation(n)
        inv = np.argsort(perm)
        h = g.relabel(perm.tolist())
        edges = h.edges()
        order = rng.permutation(len(edges))
        pool_size = int(holdout * len(edges))
        pool = [edges[i] for i in order[:pool_size]]
        base = h.without_edges(pool)
        factor = _initial_factor(base)
        out = sprinkle_to_hamilton(base, factor, SprinkleBudget(pool))
        result.rotations += out.rotations
        result.boosters_used += out.boosters_hit
        if out.found:
            cycle = [int(inv[v]) for v in out.cycle]
            if not validate_hamilton_cycle(g, cycle, n):
                raise RuntimeError("relabelled cycle failed validation")
            result.status, result.cycle = "found", cycle
            return result
    return result
